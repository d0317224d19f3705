"""Exception hierarchy shared across the package."""


class QrFuseError(Exception):
    """Base class for all domain errors raised by this package."""


class CapacityExceeded(QrFuseError):
    """Message does not fit the (version, ec_level) capacity."""


class InvalidVersion(QrFuseError):
    """Version outside 1..40 or inconsistent with a matrix size."""


class Unrecoverable(QrFuseError):
    """Errors exceed the Reed-Solomon correction capacity."""


class FormatError(QrFuseError):
    """Format information is corrupt beyond BCH repair."""


class NotFound(QrFuseError):
    """No QR code (finder triad) could be located in the image."""


class GridOutOfBounds(QrFuseError):
    """Module grid does not fit inside the image."""


class DeadZonePixels(QrFuseError):
    """Input image has pixels inside the forbidden luminance band."""


class DimensionMismatch(QrFuseError):
    """Two rasters that must share a shape do not."""


class NonSymmetricInput(QrFuseError):
    """A covariance matrix argument is not symmetric."""


class NonFiniteLoss(QrFuseError):
    """The refinement objective became NaN or infinite."""
