"""Exception types shared across the package."""


class KVisError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""

    kind = "error"

    def to_json(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class ParameterError(KVisError, ValueError):
    kind = "parameter"


class StructuralError(KVisError, ValueError):
    kind = "structural"


class CapacityError(KVisError, RuntimeError):
    kind = "capacity"

    def __init__(self, message: str, limit: int | None = None):
        super().__init__(message)
        self.limit = limit

    def to_json(self) -> dict:
        out = super().to_json()
        out["limit"] = self.limit
        return out


class ContractError(KVisError, RuntimeError):
    kind = "contract"
