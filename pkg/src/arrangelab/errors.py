"""Exception types shared across the package."""


class ArrangeLabError(Exception):
    """Base class for all package-specific errors."""


class VerticalLine(ArrangeLabError):
    """Raised when a line with b = 0 is constructed; vertical lines are unsupported."""


class ParallelLines(ArrangeLabError):
    """Raised when intersecting two lines with equal slopes."""


class DegenerateSweep(ArrangeLabError):
    """Two crossings share an x-coordinate, so the sweep order is ambiguous."""


class NotSimple(ArrangeLabError):
    """Input lines fail the simplicity check; carries the offending report."""

    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class MalformedCertificate(ArrangeLabError):
    """Certificate payload does not match the hypergraph it is checked against."""


class TooLarge(ArrangeLabError):
    """Exact solver invoked beyond its configured exhaustive limit."""


class BudgetExceeded(ArrangeLabError):
    """Exhaustive enumeration would exceed the configured budget."""


class NotConvexPosition(ArrangeLabError):
    """Input lines lack the convex-position cell structure."""


class TrichromaticityFailed(ArrangeLabError):
    """Sweep coloring could not make every eligible cell trichromatic.

    Carries the ids of the offending cells for logging and repair.
    """

    def __init__(self, cell_ids):
        super().__init__(f"cells without three colors: {sorted(cell_ids)}")
        self.cell_ids = tuple(sorted(cell_ids))


class GenerationExhausted(ArrangeLabError):
    """Random generator ran out of retries; coefficient bound too small."""


class LimitExceeded(ArrangeLabError):
    """Requested gadget or chain construction exceeds the configured size limit."""
