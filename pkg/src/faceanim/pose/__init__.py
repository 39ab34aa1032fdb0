from .types import (
    DEFAULT_SCHEMA,
    FACE68_GROUPS,
    FACE68_LOWER_LIP,
    SCHEMAS,
    PoseFrame,
    PoseSequence,
)
from .io import dumps_pose, load_pose, loads_pose, save_pose
from .render import PoseMap, RenderStyle, render_pose_map
from .resample import resample_pose
from .sources import (
    AUDIO_POSE_FPS,
    AudioPosePredictor,
    CentroidDetector,
    ConstantDetector,
    EnergyToMouthPredictor,
    LandmarkDetector,
    NeutralTemplateDetector,
    extract_pose_from_video,
    make_neutral_template,
    pose_from_audio,
)
from .library import PoseLibrary

__all__ = [
    "DEFAULT_SCHEMA", "FACE68_GROUPS", "FACE68_LOWER_LIP", "SCHEMAS",
    "PoseFrame", "PoseSequence",
    "dumps_pose", "load_pose", "loads_pose", "save_pose",
    "PoseMap", "RenderStyle", "render_pose_map",
    "resample_pose",
    "AUDIO_POSE_FPS", "AudioPosePredictor", "CentroidDetector",
    "ConstantDetector", "EnergyToMouthPredictor", "LandmarkDetector",
    "NeutralTemplateDetector", "extract_pose_from_video",
    "make_neutral_template", "pose_from_audio",
    "PoseLibrary",
]
