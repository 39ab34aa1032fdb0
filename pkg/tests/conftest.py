import numpy as np
import pytest
import torch

ACCEPTANCE_LINES = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

from faceanim.engine.config import toy_config
from faceanim.engine.models import FaceAnimationModel
from faceanim.pose.sources import make_neutral_template
from faceanim.pose.types import PoseFrame, PoseSequence


@pytest.fixture(scope="session")
def toy_cfg():
    return toy_config()


@pytest.fixture(scope="session")
def toy_model(toy_cfg):
    torch.manual_seed(1234)
    model = FaceAnimationModel(toy_cfg)
    model.eval()
    return model


@pytest.fixture(scope="session")
def neutral_template():
    return make_neutral_template()


@pytest.fixture()
def neutral_seq(neutral_template):
    def make(n_frames=8, fps=24.0, width=64, height=64):
        return PoseSequence(fps=fps, width=width, height=height,
                            frames=[neutral_template] * n_frames)
    return make


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def random_pose_frame(rng, n=68):
    pts = rng.random((n, 3))
    return PoseFrame.from_points(pts)


@pytest.fixture()
def random_frame():
    return random_pose_frame
