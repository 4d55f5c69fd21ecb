"""Exception types shared across the package."""


class NotSplitRegimeError(ValueError):
    """Parameters do not describe a split conversion (kI must be lam*kF, lam >= 2)."""


class NoSavingsError(ValueError):
    """rF >= kF: no read-bandwidth savings are possible; use the default approach."""


class PointSearchError(RuntimeError):
    """No evaluation-point tuple generates an MDS code over the given field."""


class ConstructionInvariantError(RuntimeError):
    """The per-codeword final encoding vectors disagree (convention error)."""


class PlanViolationError(RuntimeError):
    """Conversion attempted to read a subsymbol outside the download plan."""


class FormatError(ValueError):
    """Malformed codeword file or points file."""


class BoundRegionError(ValueError):
    """Bound requested outside its region of validity."""
