"""Exception hierarchy for cyclowin."""


class CyclowinError(Exception):
    """Root of every error raised by the package."""


class NonUnitChi(CyclowinError, ValueError):
    def __init__(self, chi, p):
        super().__init__(f"chi={chi} is not a unit modulo p={p}")
        self.chi = chi
        self.p = p


class NotAUnit(CyclowinError, ArithmeticError):
    pass


class NotInS(CyclowinError, ArithmeticError):
    """A rational series fell outside the divided power lattice."""


class NotInFil(CyclowinError, ValueError):
    pass


class AxiomViolation(CyclowinError):
    def __init__(self, detail):
        super().__init__(detail)
        self.detail = detail


class BadLevels(CyclowinError, ValueError):
    pass


class BadHom(CyclowinError, ValueError):
    pass


class NotInD1(CyclowinError, ValueError):
    pass


class NotStrict(CyclowinError):
    pass


class NoSmallGenerator(CyclowinError, ValueError):
    pass


class NotNilpotent(CyclowinError, ValueError):
    pass


class NoEquivariantExtension(CyclowinError):
    pass


class PrecisionUnavailable(CyclowinError):
    """Raised when guard digits are needed but the object cannot be rebuilt at higher precision."""


class BudgetExceeded(CyclowinError):
    pass


class IncompatibleBases(CyclowinError, ValueError):
    pass


class NotRank1(CyclowinError, ValueError):
    pass
