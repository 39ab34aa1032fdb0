import json

import numpy as np
import pytest
import torch

from faceanim.cli import main
from faceanim.engine.config import toy_config
from faceanim.pose.io import load_pose, save_pose
from faceanim.pose.sources import make_neutral_template
from faceanim.pose.types import PoseSequence
from faceanim.service.media import encode_image, encode_wav

TINY = dict(image_size=16, clip_len=2, base_width=8, embed_dim=8,
            sample_steps=2)


@pytest.fixture()
def tiny_config_path(tmp_path):
    path = tmp_path / "engine.json"
    path.write_text(toy_config(**TINY).to_json(), encoding="utf-8")
    return path


@pytest.fixture()
def dataset_dir(tmp_path):
    """One 4-frame clip (2 motion + 2 target) with a matching pose file."""
    rng = np.random.default_rng(33)
    clip = tmp_path / "data" / "clip0"
    clip.mkdir(parents=True)
    for i in range(4):
        img = rng.random((16, 16, 3)).astype(np.float32)
        (clip / f"frame_{i:05d}.png").write_bytes(encode_image(img))
    seq = PoseSequence(fps=24.0, width=16, height=16,
                       frames=[make_neutral_template()] * 4)
    save_pose(seq, tmp_path / "data" / "clip0.pose.json")
    return tmp_path / "data"


def test_help_exits_zero():
    assert main(["--help"]) == 0
    assert main(["pose", "--help"]) == 0


def test_unknown_option_is_usage_error(capsys):
    assert main(["train", "--bogus"]) == 1
    err = capsys.readouterr().err
    assert "Usage" in err


def test_missing_required_option_is_usage_error():
    assert main(["infer", "--ref", "x.png"]) == 1


def test_unknown_subcommand_is_usage_error():
    assert main(["frobnicate"]) == 1


def test_train_missing_data_dir_is_runtime_error(tmp_path, capsys):
    rc = main(["train", "--data", str(tmp_path / "nope"), "--steps", "1",
               "--out", str(tmp_path / "w.pt")])
    assert rc == 2
    assert "IoError" in capsys.readouterr().err


def test_train_writes_checkpoint_and_loss_log(tmp_path, tiny_config_path,
                                              dataset_dir, capsys):
    out = tmp_path / "weights.pt"
    rc = main(["train", "--config", str(tiny_config_path),
               "--data", str(dataset_dir), "--steps", "3",
               "--out", str(out), "--seed", "5"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    for i, line in enumerate(lines, start=1):
        step, loss = line.split(",")
        assert int(step) == i
        assert float(loss) > 0
    assert (tmp_path / "weights.pt.loss.csv").read_text().splitlines() == lines

    from faceanim.engine.checkpoint import load_checkpoint
    model = load_checkpoint(out)
    assert model.config.image_size == 16


def test_train_zero_steps_still_saves(tmp_path, tiny_config_path,
                                      dataset_dir):
    out = tmp_path / "w0.pt"
    assert main(["train", "--config", str(tiny_config_path),
                 "--data", str(dataset_dir), "--steps", "0",
                 "--out", str(out)]) == 0
    assert out.exists()
    assert (tmp_path / "w0.pt.loss.csv").read_text() == ""


@pytest.fixture()
def trained(tmp_path, tiny_config_path, dataset_dir):
    out = tmp_path / "trained.pt"
    assert main(["train", "--config", str(tiny_config_path),
                 "--data", str(dataset_dir), "--steps", "1",
                 "--out", str(out)]) == 0
    return out


def test_infer_end_to_end(tmp_path, trained, capsys):
    rng = np.random.default_rng(44)
    ref = tmp_path / "ref.png"
    ref.write_bytes(encode_image(rng.random((16, 16, 3)).astype(np.float32)))
    pose_path = tmp_path / "seq.pose.json"
    save_pose(PoseSequence(fps=24.0, width=16, height=16,
                           frames=[make_neutral_template()] * 3), pose_path)
    out = tmp_path / "out.vid"
    latents = tmp_path / "latents.pt"
    rc = main(["infer", "--ref", str(ref), "--pose", str(pose_path),
               "--ckpt", str(trained), "--out", str(out), "--seed", "1",
               "--debug-latents", str(latents)])
    assert rc == 0
    assert out.stat().st_size > 0
    dumped = torch.load(latents, weights_only=True)
    # 3 frames with clip_len 2 -> clips of 2 and 1 frames
    assert [t.shape[0] for t in dumped] == [2, 1]
    assert "wrote 3 frames" in capsys.readouterr().out


def test_infer_accepts_library_id(tmp_path, trained):
    from faceanim.pose.library import PoseLibrary

    lib_dir = tmp_path / "lib"
    PoseLibrary(lib_dir).add("wave", PoseSequence(
        fps=24.0, width=16, height=16,
        frames=[make_neutral_template()] * 2))
    rng = np.random.default_rng(45)
    ref = tmp_path / "ref.png"
    ref.write_bytes(encode_image(rng.random((16, 16, 3)).astype(np.float32)))
    out = tmp_path / "out.vid"
    rc = main(["infer", "--ref", str(ref), "--pose", "wave",
               "--ckpt", str(trained), "--out", str(out),
               "--library", str(lib_dir)])
    assert rc == 0
    assert out.exists()


def test_infer_missing_reference_is_runtime_error(tmp_path, trained, capsys):
    rc = main(["infer", "--ref", str(tmp_path / "absent.png"),
               "--pose", "whatever", "--ckpt", str(trained),
               "--out", str(tmp_path / "o.vid")])
    assert rc == 2
    assert "IoError" in capsys.readouterr().err


def test_pose_from_audio_command(tmp_path):
    t = np.linspace(0, 1.0, 8000, endpoint=False)
    wav_path = tmp_path / "tone.wav"
    wav_path.write_bytes(encode_wav(0.4 * np.sin(2 * np.pi * 330 * t), 8000))
    out = tmp_path / "audio.pose.json"
    assert main(["pose", "from-audio", "--audio", str(wav_path),
                 "--out", str(out)]) == 0
    seq = load_pose(out)
    assert seq.fps == 24.0
    assert len(seq) == 24


def test_pose_render_command(tmp_path):
    pose_path = tmp_path / "seq.pose.json"
    save_pose(PoseSequence(fps=24.0, width=32, height=32,
                           frames=[make_neutral_template()] * 5), pose_path)
    out_dir = tmp_path / "maps"
    assert main(["pose", "render", "--pose", str(pose_path),
                 "--out-dir", str(out_dir)]) == 0
    files = sorted(out_dir.glob("frame_*.png"))
    assert [f.name for f in files] == [f"frame_{i:05d}.png" for i in range(5)]


def test_pose_extract_bad_video_is_runtime_error(tmp_path, capsys):
    bad = tmp_path / "bad.mp4"
    bad.write_bytes(b"definitely not a video")
    rc = main(["pose", "extract", "--video", str(bad),
               "--out", str(tmp_path / "p.pose.json")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err
