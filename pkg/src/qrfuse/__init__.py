"""Scannable aesthetic QR codes.

Encode messages into QR module matrices, fuse them with guidance images
into decodable blueprint rasters, verify scannability with a scanner-model
decoder, refine stylized images back to zero code error by gradient
descent, and stress-test results in a synthetic scanning campaign.
"""

from .qrcodec import CodeTarget, Message, ModuleRole, encode_message, rs_decode_payload

__version__ = "0.1.0"
