"""QR symbol construction and matrix-level decoding.

Byte-mode encoding, Reed-Solomon block structure, masking, format/version
info, and the inverse path from a module matrix back to the payload.  The
module matrix convention throughout: bits use 1 = white/light, 0 = black/dark
(the rendered color), while codeword bits use the standard 1 = dark, so the
two are complements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache

import numpy as np

from . import tables
from .errors import CapacityExceeded, FormatError, InvalidVersion, Unrecoverable
from .gf256 import rs_correct_block, rs_encode_block


class ModuleRole(IntEnum):
    FINDER = 0          # finder squares plus their separators
    ALIGNMENT = 1
    TIMING = 2
    FORMAT_VERSION = 3  # format info, version info, dark module
    DATA = 4            # codeword bits
    PADDING = 5         # remainder bits after the last codeword


@dataclass(frozen=True)
class Message:
    """Payload plus the coding parameters it was (or will be) encoded with."""

    data: bytes
    ec_level: str = "H"
    version: int = 5

    def __post_init__(self):
        if not 1 <= self.version <= 40:
            raise InvalidVersion(f"version {self.version} outside 1..40")
        if self.ec_level not in tables.EC_LEVELS:
            raise InvalidVersion(f"unknown EC level {self.ec_level!r}")


@dataclass
class CodeTarget:
    """Ideal module colors (1 white, 0 black) with per-module roles."""

    bits: np.ndarray   # (n, n) uint8 in {0, 1}
    roles: np.ndarray  # (n, n) uint8 of ModuleRole values
    mask_id: int = 0

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    @property
    def version(self) -> int:
        return (self.n - 17) // 4

    def copy(self) -> "CodeTarget":
        return CodeTarget(self.bits.copy(), self.roles.copy(), self.mask_id)

    def data_mask(self) -> np.ndarray:
        """Boolean mask of Data and Padding (remainder) modules."""
        return (self.roles == ModuleRole.DATA) | (self.roles == ModuleRole.PADDING)


def size_for_version(version: int) -> int:
    if not 1 <= version <= 40:
        raise InvalidVersion(f"version {version} outside 1..40")
    return 17 + 4 * version


_FINDER = np.array([
    [1, 1, 1, 1, 1, 1, 1],
    [1, 0, 0, 0, 0, 0, 1],
    [1, 0, 1, 1, 1, 0, 1],
    [1, 0, 1, 1, 1, 0, 1],
    [1, 0, 1, 1, 1, 0, 1],
    [1, 0, 0, 0, 0, 0, 1],
    [1, 1, 1, 1, 1, 1, 1],
], dtype=bool)

_ALIGN = np.array([
    [1, 1, 1, 1, 1],
    [1, 0, 0, 0, 1],
    [1, 0, 1, 0, 1],
    [1, 0, 0, 0, 1],
    [1, 1, 1, 1, 1],
], dtype=bool)


def alignment_positions(version: int) -> list[tuple[int, int]]:
    """Alignment pattern centers, excluding the three finder corners."""
    coords = tables.ALIGNMENT_CENTERS[version]
    if not coords:
        return []
    first, last = coords[0], coords[-1]
    skip = {(first, first), (first, last), (last, first)}
    return [(r, c) for r in coords for c in coords if (r, c) not in skip]


@lru_cache(maxsize=None)
def _function_layout(version: int):
    """Dark flags and roles for all function modules of a version.

    Returns (dark, roles, is_function) arrays of shape (n, n); data-region
    modules keep role DATA/PADDING placeholders assigned by the zigzag order.
    """
    n = size_for_version(version)
    dark = np.zeros((n, n), dtype=bool)
    roles = np.full((n, n), ModuleRole.DATA, dtype=np.uint8)
    func = np.zeros((n, n), dtype=bool)

    def put_finder(r0, c0):
        # separators: one white module ringing the 7x7 square, inside bounds
        r1, c1 = max(r0 - 1, 0), max(c0 - 1, 0)
        r2, c2 = min(r0 + 8, n), min(c0 + 8, n)
        dark[r1:r2, c1:c2] = False
        roles[r1:r2, c1:c2] = ModuleRole.FINDER
        func[r1:r2, c1:c2] = True
        dark[r0:r0 + 7, c0:c0 + 7] = _FINDER

    put_finder(0, 0)
    put_finder(0, n - 7)
    put_finder(n - 7, 0)

    # timing patterns, row 6 and column 6
    for i in range(8, n - 8):
        for r, c in ((6, i), (i, 6)):
            dark[r, c] = (i % 2) == 0
            roles[r, c] = ModuleRole.TIMING
            func[r, c] = True

    for r, c in alignment_positions(version):
        dark[r - 2:r + 3, c - 2:c + 3] = _ALIGN
        roles[r - 2:r + 3, c - 2:c + 3] = ModuleRole.ALIGNMENT
        func[r - 2:r + 3, c - 2:c + 3] = True

    # format info areas (values written later) and the fixed dark module
    for r, c in _format_positions(n, 0) + _format_positions(n, 1):
        roles[r, c] = ModuleRole.FORMAT_VERSION
        func[r, c] = True
    dark[n - 8, 8] = True
    roles[n - 8, 8] = ModuleRole.FORMAT_VERSION
    func[n - 8, 8] = True

    if version >= 7:
        for k in range(18):
            for r, c in ((n - 11 + k % 3, k // 3), (k // 3, n - 11 + k % 3)):
                roles[r, c] = ModuleRole.FORMAT_VERSION
                func[r, c] = True

    dark.setflags(write=False)
    roles.setflags(write=False)
    func.setflags(write=False)
    return dark, roles, func


def _format_positions(n: int, copy: int) -> list[tuple[int, int]]:
    """Module positions of format bit i (i = 0 is the LSB) for one copy."""
    if copy == 0:
        pos = [(i, 8) for i in range(6)] + [(7, 8), (8, 8), (8, 7)]
        pos += [(8, 14 - i) for i in range(9, 15)]
    else:
        pos = [(8, n - 1 - i) for i in range(8)]
        pos += [(n - 15 + i, 8) for i in range(8, 15)]
    return pos


@lru_cache(maxsize=None)
def zigzag_order(version: int) -> tuple[tuple[int, int], ...]:
    """Data-region module coordinates in codeword placement order."""
    n = size_for_version(version)
    _, _, func = _function_layout(version)
    order = []
    col = n - 1
    upward = True
    while col > 0:
        if col == 6:
            col -= 1
        rows = range(n - 1, -1, -1) if upward else range(n)
        for r in rows:
            for c in (col, col - 1):
                if not func[r, c]:
                    order.append((r, c))
        upward = not upward
        col -= 2
    return tuple(order)


_MASKS = (
    lambda r, c: (r + c) % 2 == 0,
    lambda r, c: r % 2 == 0,
    lambda r, c: c % 3 == 0,
    lambda r, c: (r + c) % 3 == 0,
    lambda r, c: (r // 2 + c // 3) % 2 == 0,
    lambda r, c: (r * c) % 2 + (r * c) % 3 == 0,
    lambda r, c: ((r * c) % 2 + (r * c) % 3) % 2 == 0,
    lambda r, c: ((r + c) % 2 + (r * c) % 3) % 2 == 0,
)


@lru_cache(maxsize=None)
def mask_matrix(version: int, mask_id: int) -> np.ndarray:
    n = size_for_version(version)
    fn = _MASKS[mask_id]
    out = np.fromfunction(np.vectorize(fn), (n, n), dtype=int).astype(bool)
    out.setflags(write=False)
    return out


def _bch_remainder(value: int, gen: int, msg_bits: int, rem_bits: int) -> int:
    v = value << rem_bits
    for i in range(msg_bits + rem_bits - 1, rem_bits - 1, -1):
        if v >> i & 1:
            v ^= gen << (i - rem_bits)
    return v


_FORMAT_XOR = 0b101010000010010


def format_value(level: str, mask_id: int) -> int:
    data5 = (tables.LEVEL_BITS[level] << 3) | mask_id
    return ((data5 << 10) | _bch_remainder(data5, 0b10100110111, 5, 10)) ^ _FORMAT_XOR


def version_value(version: int) -> int:
    return (version << 12) | _bch_remainder(version, 0b1111100100101, 6, 12)


@lru_cache(maxsize=None)
def _block_structure(version: int, level: str):
    """Per block (data_len,) plus interleaved codeword indices.

    Returns (ks, ec, data_idx, ec_idx): ks[b] is the data length of block b,
    data_idx[b][j] / ec_idx[b][j] the index of that byte in the interleaved
    codeword sequence.
    """
    ec, groups = tables.EC_BLOCKS[version][level]
    ks = [k for nb, k in groups for _ in range(nb)]
    data_idx = [[] for _ in ks]
    ec_idx = [[] for _ in ks]
    pos = 0
    for j in range(max(ks)):
        for b, k in enumerate(ks):
            if j < k:
                data_idx[b].append(pos)
                pos += 1
    for j in range(ec):
        for b in range(len(ks)):
            ec_idx[b].append(pos)
            pos += 1
    return ks, ec, data_idx, ec_idx


def build_data_codewords(msg: Message) -> tuple[list[int], int]:
    """Byte-mode data codewords incl. pad bytes; returns (codewords, n_pad)."""
    version, level = msg.version, msg.ec_level
    cap = tables.byte_mode_capacity(version, level)
    if len(msg.data) > cap:
        raise CapacityExceeded(
            f"{len(msg.data)} bytes exceed capacity {cap} of version {version}-{level}")
    count_bits = 8 if version <= 9 else 16
    bits = []

    def push(value, width):
        for i in range(width - 1, -1, -1):
            bits.append(value >> i & 1)

    push(0b0100, 4)
    push(len(msg.data), count_bits)
    for byte in msg.data:
        push(byte, 8)
    total_bits = 8 * tables.data_codewords(version, level)
    push(0, min(4, total_bits - len(bits)))       # terminator
    if len(bits) % 8:
        push(0, 8 - len(bits) % 8)

    codewords = [
        int("".join(map(str, bits[i:i + 8])), 2) for i in range(0, len(bits), 8)
    ]
    n_pad = tables.data_codewords(version, level) - len(codewords)
    for i in range(n_pad):
        codewords.append(0xEC if i % 2 == 0 else 0x11)
    return codewords, n_pad


def _interleave(msg: Message, data_cw: list[int]) -> list[int]:
    ks, ec, data_idx, ec_idx = _block_structure(msg.version, msg.ec_level)
    out = [0] * (sum(ks) + ec * len(ks))
    offset = 0
    for b, k in enumerate(ks):
        block = data_cw[offset:offset + k]
        offset += k
        parity = rs_encode_block(block, ec)
        for j, idx in enumerate(data_idx[b]):
            out[idx] = block[j]
        for j, idx in enumerate(ec_idx[b]):
            out[idx] = parity[j]
    return out


def encode_message(msg: Message, mask_id: int = 0) -> CodeTarget:
    """Encode a message into its module matrix with the given mask pattern."""
    if not 0 <= mask_id <= 7:
        raise InvalidVersion(f"mask id {mask_id} outside 0..7")
    version = msg.version
    n = size_for_version(version)
    data_cw, _ = build_data_codewords(msg)
    codewords = _interleave(msg, data_cw)

    dark0, roles0, _ = _function_layout(version)
    dark = dark0.copy()
    roles = roles0.copy()

    order = zigzag_order(version)
    total_bits = 8 * len(codewords)
    mask = mask_matrix(version, mask_id)
    for i, (r, c) in enumerate(order):
        if i < total_bits:
            bit = codewords[i >> 3] >> (7 - (i & 7)) & 1
            roles[r, c] = ModuleRole.DATA
        else:
            bit = 0
            roles[r, c] = ModuleRole.PADDING
        dark[r, c] = bool(bit) ^ mask[r, c]

    fmt = format_value(msg.ec_level, mask_id)
    for copy in (0, 1):
        for i, (r, c) in enumerate(_format_positions(n, copy)):
            dark[r, c] = bool(fmt >> i & 1)
    if version >= 7:
        vv = version_value(version)
        for k in range(18):
            bit = bool(vv >> k & 1)
            dark[n - 11 + k % 3, k // 3] = bit
            dark[k // 3, n - 11 + k % 3] = bit

    bits = (~dark).astype(np.uint8)
    return CodeTarget(bits=bits, roles=roles, mask_id=mask_id)


def _read_format(dark: np.ndarray) -> tuple[str, int]:
    n = dark.shape[0]
    reads = []
    for copy in (0, 1):
        v = 0
        for i, (r, c) in enumerate(_format_positions(n, copy)):
            v |= int(dark[r, c]) << i
        reads.append(v)
    best = None
    for level, lb in tables.LEVEL_BITS.items():
        for mask_id in range(8):
            expect = format_value(level, mask_id)
            d = min(bin(reads[0] ^ expect).count("1"),
                    bin(reads[1] ^ expect).count("1"))
            if best is None or d < best[0]:
                best = (d, level, mask_id)
    if best[0] > 3:
        raise FormatError(f"format info distance {best[0]} exceeds BCH capacity")
    return best[1], best[2]


def decode_matrix(dark: np.ndarray) -> Message:
    """Recover the message from a boolean dark-module matrix.

    Applies format-info BCH repair, unmasking, block deinterleaving and
    Reed-Solomon correction, then parses the data bitstream.
    """
    n = dark.shape[0]
    if dark.shape != (n, n) or (n - 17) % 4 or not 21 <= n <= 177:
        raise InvalidVersion(f"matrix size {dark.shape} is not a QR version")
    version = (n - 17) // 4
    level, mask_id = _read_format(dark)

    mask = mask_matrix(version, mask_id)
    order = zigzag_order(version)
    total_cw = tables.TOTAL_CODEWORDS[version - 1]
    codewords = [0] * total_cw
    for i in range(total_cw * 8):
        r, c = order[i]
        bit = int(dark[r, c]) ^ int(mask[r, c])
        codewords[i >> 3] |= bit << (7 - (i & 7))

    ks, ec, data_idx, ec_idx = _block_structure(version, level)
    data = []
    for b, k in enumerate(ks):
        block = [codewords[i] for i in data_idx[b]] + [codewords[i] for i in ec_idx[b]]
        corrected = rs_correct_block(block, ec)
        data.extend(corrected[:k])
    payload = _parse_bitstream(data, version)
    return Message(data=payload, ec_level=level, version=version)


_ALNUM = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ $%*+-./:"


def _parse_bitstream(codewords: list[int], version: int) -> bytes:
    bits = []
    for cw in codewords:
        for i in range(7, -1, -1):
            bits.append(cw >> i & 1)
    pos = 0

    def take(width):
        nonlocal pos
        if pos + width > len(bits):
            raise Unrecoverable("bitstream truncated")
        v = 0
        for b in bits[pos:pos + width]:
            v = v << 1 | b
        pos += width
        return v

    out = bytearray()
    while pos + 4 <= len(bits):
        mode = take(4)
        if mode == 0b0000:
            break
        if mode == 0b0100:
            count = take(8 if version <= 9 else 16)
            for _ in range(count):
                out.append(take(8))
        elif mode == 0b0001:
            count = take(10 if version <= 9 else (12 if version <= 26 else 14))
            while count >= 3:
                out.extend(f"{take(10):03d}".encode())
                count -= 3
            if count == 2:
                out.extend(f"{take(7):02d}".encode())
            elif count == 1:
                out.extend(f"{take(4):01d}".encode())
        elif mode == 0b0010:
            count = take(9 if version <= 9 else (11 if version <= 26 else 13))
            while count >= 2:
                v = take(11)
                out.append(ord(_ALNUM[v // 45]))
                out.append(ord(_ALNUM[v % 45]))
                count -= 2
            if count == 1:
                out.append(ord(_ALNUM[take(6)]))
        else:
            raise Unrecoverable(f"unsupported segment mode {mode:04b}")
    return bytes(out)


def rs_decode_payload(target: CodeTarget) -> Message:
    """Round-trip oracle: message embedded in a CodeTarget's module colors."""
    return decode_matrix(target.bits == 0)


def render_target(target: CodeTarget, module_px: int = 16) -> np.ndarray:
    """Rasterize module colors to a uint8 image (white 255, black 0)."""
    return np.kron(target.bits, np.full((module_px, module_px), 255, dtype=np.uint8))
