"""Exception hierarchy.

Two families matter to callers: :class:`ValidationError` for malformed input
data, and :class:`PreconditionError` for well-formed input that a particular
rule or checker cannot accept.  The CLI maps them to distinct exit codes.
"""


class PseudomarketError(Exception):
    """Base class for every error raised by this package."""

    code = "Error"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_dict(self):
        out = {"error": self.code, "message": str(self)}
        out.update({k: v for k, v in self.details.items() if v is not None})
        return out


class ValidationError(PseudomarketError):
    code = "ValidationError"


class NonRectangular(ValidationError):
    code = "NonRectangular"


class EmptyInstance(ValidationError):
    code = "EmptyInstance"


class ZeroRow(ValidationError):
    code = "ZeroRow"

    def __init__(self, agent):
        super().__init__(f"agent {agent} has no positive utility", agent=agent)
        self.agent = agent


class ZeroColumn(ValidationError):
    code = "ZeroColumn"

    def __init__(self, item):
        super().__init__(f"item {item} has no positive utility for any agent", item=item)
        self.item = item


class NegativeUtility(ValidationError):
    code = "NegativeUtility"

    def __init__(self, agent, item):
        super().__init__(f"u[{agent}][{item}] is negative", agent=agent, item=item)
        self.agent = agent
        self.item = item


class NegativeResult(ValidationError):
    code = "NegativeResult"


class DimensionMismatch(ValidationError):
    code = "DimensionMismatch"


class InvalidAssignment(ValidationError):
    code = "InvalidAssignment"


class PreconditionError(PseudomarketError):
    code = "PreconditionError"


class NotSquare(PreconditionError):
    code = "NotSquare"


class NotDichotomous(PreconditionError):
    code = "NotDichotomous"


class NotBinary(PreconditionError):
    code = "NotBinary"


class MassMismatch(PreconditionError):
    code = "MassMismatch"


class EmptyMarket(PreconditionError):
    code = "EmptyMarket"


class TooLarge(PreconditionError):
    code = "TooLarge"


class Infeasible(PreconditionError):
    code = "Infeasible"


class ZeroUtilityAgent(PreconditionError):
    code = "ZeroUtilityAgent"


class CertificateInvalid(PreconditionError):
    code = "CertificateInvalid"


class NotDoublyStochastic(PreconditionError):
    code = "NotDoublyStochastic"


class NoPerfectMatching(PreconditionError):
    code = "NoPerfectMatching"


class RuleUnavailable(PreconditionError):
    code = "RuleUnavailable"


class NotBalanced(PreconditionError):
    code = "NotBalanced"
