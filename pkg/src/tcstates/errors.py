"""Exception hierarchy for tcstates."""


class TCSError(Exception):
    """Base class for all errors raised by tcstates."""


class InvalidStep(TCSError, ValueError):
    pass


class NonAdmissibleB(TCSError, ValueError):
    """The variational parameter b has Im(b) <= 0."""


class CausticDetected(TCSError, ArithmeticError):
    """|z(t)| fell below the caustic threshold."""


class DivisionNearCaustic(TCSError, ArithmeticError):
    pass


class GridMismatch(TCSError, ValueError):
    pass


class TooFewPoints(TCSError, ValueError):
    pass


class DegenerateSymbol(TCSError, ArithmeticError):
    """h_pp is too close to zero for the ratio h_xx / h_pp."""


class GridTooNarrow(TCSError, ValueError):
    pass


class ZeroNorm(TCSError, ArithmeticError):
    pass


class ConfigInvalid(TCSError, ValueError):
    """Propagator configuration violates the phase-wrap guards."""


class ConfigParseError(TCSError, ValueError):
    pass


class SchemaError(TCSError, ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))
