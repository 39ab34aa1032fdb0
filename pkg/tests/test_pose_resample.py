import pytest

from faceanim.errors import BadFps
from faceanim.pose.resample import resample_pose
from faceanim.pose.types import PoseFrame, PoseSequence


def seq_with_x(xs, fps=1.0):
    frames = [PoseFrame.from_points([(x, 0.5, 1.0)] * 68) for x in xs]
    return PoseSequence(fps=fps, width=64, height=64, frames=frames)


def test_identity_resample(neutral_seq):
    seq = neutral_seq(n_frames=10, fps=24)
    out = resample_pose(seq, 24)
    assert out.frames == seq.frames
    assert out.fps == seq.fps


def test_linear_interpolation_on_source_timeline():
    # endpoints at t=0s and t=1s; 3 fps samples land at 0, 1/3, 2/3, 1
    seq = seq_with_x([0.0, 1.0], fps=1.0)
    out = resample_pose(seq, 3.0)
    xs = [f.keypoints[0][0] for f in out.frames]
    assert xs == pytest.approx([0.0, 1/3, 2/3, 1.0])
    assert out.fps == 3.0


def test_single_frame_sequence():
    seq = seq_with_x([0.4], fps=1.0)
    out = resample_pose(seq, 30.0)
    assert len(out) == 1
    assert out.frames[0] == seq.frames[0]


def test_idempotent():
    seq = seq_with_x([0.0, 0.3, 0.9, 1.0], fps=7.0)
    once = resample_pose(seq, 24.0)
    twice = resample_pose(once, 24.0)
    assert once.frames == twice.frames


def test_confidence_is_min_of_bracketing_frames():
    a = PoseFrame.from_points([(0.0, 0.0, 0.2)] * 68)
    b = PoseFrame.from_points([(1.0, 1.0, 0.9)] * 68)
    seq = PoseSequence(fps=1.0, width=64, height=64, frames=[a, b])
    out = resample_pose(seq, 2.0)
    mid = out.frames[1]
    assert mid.keypoints[0][2] == 0.2


def test_duration_preserved_within_one_frame_period():
    seq = seq_with_x([0.1] * 25, fps=25.0)  # ~1 s span
    out = resample_pose(seq, 24.0)
    in_span = (len(seq) - 1) / seq.fps
    out_span = (len(out) - 1) / out.fps
    assert abs(in_span - out_span) <= 1.0 / out.fps


def test_coordinates_stay_in_unit_box():
    seq = seq_with_x([0.0, 1.0, 0.0, 1.0], fps=5.0)
    out = resample_pose(seq, 24.0)
    for f in out.frames:
        for x, y, c in f.keypoints:
            assert 0.0 <= x <= 1.0 and 0.0 <= y <= 1.0


def test_bad_fps_rejected(neutral_seq):
    with pytest.raises(BadFps):
        resample_pose(neutral_seq(), 0)
