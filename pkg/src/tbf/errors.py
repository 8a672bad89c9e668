"""Exception hierarchy.

Two families matter to callers: :class:`InputError` means the data handed in
does not describe the object it claims to (exit code 2 on the command line),
:class:`VerificationError` means an internal certificate did not check out
(exit code 1).
"""


class TBFError(Exception):
    pass


class InputError(TBFError):
    pass


class VerificationError(TBFError):
    pass


class ParseError(InputError):
    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class NotAGroup(InputError):
    def __init__(self, reason, witness=None):
        self.reason = reason
        self.witness = witness
        super().__init__(f"not a group ({reason}); witness={witness}")


class CapExceeded(InputError):
    def __init__(self, what, cap):
        self.what = what
        self.cap = cap
        super().__init__(f"{what} exceeds cap {cap}")


class NotAHomomorphism(InputError):
    def __init__(self, x, y):
        self.x = x
        self.y = y
        super().__init__(f"map(x*y) != map(x)*map(y) for x={x}, y={y}")


class GroupMismatch(InputError):
    pass


class NotGenerating(InputError):
    pass


class NotNormal(InputError):
    pass


class NotInvariant(VerificationError):
    pass


class InvalidEndo(InputError):
    pass


class InfiniteCokernel(InputError):
    pass


class NonIntegerAverage(VerificationError):
    pass


class LiftFailure(VerificationError):
    pass


class PreconditionNotFPoint(InputError):
    pass


class NotARepresentation(InputError):
    pass


class EquivarianceFailure(InputError):
    def __init__(self, f):
        self.f = f
        super().__init__(f"M*theta(f) != theta(psi(f))*M at f={f}")


class CocycleFailure(InputError):
    def __init__(self, f1, f2):
        self.f1 = f1
        self.f2 = f2
        super().__init__(f"cocycle condition fails at (f1, f2)=({f1}, {f2})")


class StabilizationFailure(VerificationError):
    def __init__(self, k, before, after):
        self.k = k
        super().__init__(f"class count changed under refinement k={k}: {before} -> {after}")


class InfiniteTerm(InputError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"R(phi^{n}) is infinite; congruences need every term finite")


class NegativePeriodCount(VerificationError):
    def __init__(self, d, value):
        self.d = d
        super().__init__(f"P_{d} = {value} < 0")


class NonDivisible(VerificationError):
    def __init__(self, d, value):
        self.d = d
        super().__init__(f"P_{d} = {value} is not divisible by {d}")
