"""Exception types. Each carries a stable ``token`` used by the CLI on stderr."""


class SkgError(ValueError):
    token = "SkgError"


class InvalidMatrix(SkgError):
    token = "InvalidMatrix"


class SigmaOutOfRange(SkgError):
    token = "SigmaOutOfRange"


class OddLevels(SkgError):
    token = "OddLevels"


class SliceOutOfRange(SkgError):
    token = "SliceOutOfRange"


class AsymmetricMatrix(SkgError):
    token = "AsymmetricMatrix"


class TauIsOne(SkgError):
    token = "TauIsOne"


class NoiseTooLarge(SkgError):
    token = "NoiseTooLarge"


class InvalidParams(SkgError):
    token = "InvalidParams"


class VertexOutOfRange(SkgError):
    token = "VertexOutOfRange"


class SelfLoopPresent(SkgError):
    token = "SelfLoopPresent"


class MalformedEdgeFile(SkgError):
    token = "MalformedEdgeFile"
