"""Exception hierarchy shared across the package."""


class FaceAnimError(Exception):
    """Base class for all domain errors."""


# --- pose acquisition / serialization ---

class EmptyVideo(FaceAnimError):
    pass


class DetectorFailure(FaceAnimError):
    pass


class EmptyAudio(FaceAnimError):
    pass


class BadSampleRate(FaceAnimError):
    pass


class BadCanvas(FaceAnimError):
    pass


class BadFps(FaceAnimError):
    pass


class NotFound(FaceAnimError):
    pass


class DuplicateId(FaceAnimError):
    pass


class ParseError(FaceAnimError):
    pass


class IoError(FaceAnimError):
    pass


# --- conditioning ---

class NoFace(FaceAnimError):
    pass


class ShapeMismatch(FaceAnimError):
    pass


class OutOfRange(FaceAnimError):
    pass


# --- engine ---

class BadSchedule(FaceAnimError):
    pass


class BadStep(FaceAnimError):
    pass


class BadStepOrder(FaceAnimError):
    pass


class BadConfig(FaceAnimError):
    pass


class NonFiniteLoss(FaceAnimError):
    pass


# --- service ---

class EncoderUnavailable(FaceAnimError):
    pass


class EncodeFailed(FaceAnimError):
    pass
