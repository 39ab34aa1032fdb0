"""Operator command line: training, offline inference, pose tools, serving.

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .errors import FaceAnimError, IoError, NonFiniteLoss


@click.group(name="faceanim")
def cli():
    """One-shot pose-driven face animation toolkit."""


@cli.command()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="EngineConfig JSON; defaults to the 64px toy profile.")
@click.option("--data", "data_dir", required=True, type=click.Path())
@click.option("--steps", type=int, required=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--lr", type=float, default=2e-3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def train(config_path, data_dir, steps, out_path, lr, seed):
    """Train on a frame-directory dataset; writes a checkpoint and
    per-step `step,loss` CSV lines to stdout and <out>.loss.csv."""
    import torch

    from .engine.checkpoint import save_checkpoint
    from .engine.config import EngineConfig, toy_config
    from .engine.data import load_dataset
    from .engine.models import FaceAnimationModel
    from .engine.schedule import make_schedule
    from .engine.training import train_step

    config = EngineConfig.from_file(config_path) if config_path \
        else toy_config()
    batches = load_dataset(data_dir, config)
    torch.manual_seed(seed)
    model = FaceAnimationModel(config)
    schedule = make_schedule(config.T, config.beta_start, config.beta_end)
    optimizer = torch.optim.Adam(model.parameters(), lr=lr)
    rng = torch.Generator().manual_seed(seed)

    log_path = Path(f"{out_path}.loss.csv")
    with log_path.open("w", encoding="utf-8") as log:
        for step in range(1, steps + 1):
            batch = batches[(step - 1) % len(batches)]
            loss = train_step(model, optimizer, batch, schedule, rng)
            line = f"{step},{loss}"
            click.echo(line)
            log.write(line + "\n")
    save_checkpoint(model, out_path)


@cli.command()
@click.option("--ref", "ref_path", required=True, type=click.Path())
@click.option("--pose", "pose_ref", required=True,
              help="Pose file path, or a library id with --library.")
@click.option("--ckpt", "ckpt_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--seed", type=int, default=None)
@click.option("--library", "library_dir", type=click.Path(),
              default="pose_library", show_default=True)
@click.option("--debug-latents", "latents_path", type=click.Path(),
              default=None, help="Dump per-clip final latents to this file.")
def infer(ref_path, pose_ref, ckpt_path, out_path, seed, library_dir,
          latents_path):
    """Animate a reference image along a pose sequence into a video file."""
    import torch

    from .engine.checkpoint import load_checkpoint
    from .engine.generate import GenerationTrace, generate_video
    from .pose.io import load_pose
    from .pose.library import PoseLibrary
    from .service.encode import encode_video
    from .service.media import decode_image, resize_image

    model = load_checkpoint(ckpt_path)
    if not Path(ref_path).exists():
        raise IoError(f"no such reference image: {ref_path}")
    reference = decode_image(Path(ref_path).read_bytes())
    size = model.config.image_size
    reference = resize_image(reference, size, size)

    if Path(pose_ref).exists():
        seq = load_pose(pose_ref)
    else:
        seq = PoseLibrary(library_dir).get(pose_ref)

    trace = GenerationTrace() if latents_path else None
    frames = generate_video(reference, seq, model, seed=seed, trace=trace)
    data, media_type = encode_video(frames, model.config.fps_out)
    Path(out_path).write_bytes(data)
    if latents_path:
        torch.save([x for x in trace.final_latents], latents_path)
    click.echo(f"wrote {len(frames)} frames ({media_type}) to {out_path}")


@cli.group()
def pose():
    """Pose-sequence utilities."""


@pose.command("extract")
@click.option("--video", "video_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
def pose_extract(video_path, out_path):
    """Extract a pose sequence from a video file."""
    from .pose.io import save_pose
    from .pose.sources import NeutralTemplateDetector, extract_pose_from_video
    from .service.media import UndecodableMedia, decode_video

    if not Path(video_path).exists():
        raise IoError(f"no such video: {video_path}")
    frames, fps = decode_video(Path(video_path).read_bytes())
    seq = extract_pose_from_video(frames, fps, NeutralTemplateDetector())
    save_pose(seq, out_path)
    click.echo(f"extracted {len(seq)} frames at {seq.fps} fps")


@pose.command("render")
@click.option("--pose", "pose_path", required=True, type=click.Path())
@click.option("--out-dir", "out_dir", required=True, type=click.Path())
def pose_render(pose_path, out_dir):
    """Rasterize every frame of a pose file to frame_%05d.png."""
    from .pose.io import load_pose
    from .pose.render import render_pose_map
    from .service.media import encode_image

    seq = load_pose(pose_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(seq.frames):
        pm = render_pose_map(frame, seq.width, seq.height)
        (out / f"frame_{i:05d}.png").write_bytes(encode_image(pm.pixels))
    click.echo(f"rendered {len(seq)} frames to {out_dir}")


@pose.command("from-audio")
@click.option("--audio", "audio_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
def pose_from_audio_cmd(audio_path, out_path):
    """Predict a 24 fps pose sequence from a WAV file."""
    from .pose.io import save_pose
    from .pose.sources import make_neutral_template, pose_from_audio
    from .service.media import decode_wav

    if not Path(audio_path).exists():
        raise IoError(f"no such audio file: {audio_path}")
    samples, rate = decode_wav(Path(audio_path).read_bytes())
    seq = pose_from_audio(samples, rate, make_neutral_template())
    save_pose(seq, out_path)
    click.echo(f"predicted {len(seq)} frames at {seq.fps} fps")


@cli.command()
@click.option("--config", "config_path", type=click.Path(), default=None)
def serve(config_path):
    """Run the HTTP service with background generation workers."""
    import uvicorn

    from .engine.checkpoint import load_checkpoint
    from .engine.config import toy_config
    from .engine.models import FaceAnimationModel
    from .service.app import create_app
    from .service.config import ServiceConfig
    from .service.worker import make_generator

    config = ServiceConfig.from_file(config_path) if config_path \
        else ServiceConfig()
    if config.weights_path:
        model = load_checkpoint(config.weights_path)
    else:
        model = FaceAnimationModel(toy_config())
        model.eval()
    app = create_app(config, generator=make_generator(model),
                     start_workers=True)
    uvicorn.run(app, host=config.host, port=config.port)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.UsageError as e:
        click.echo(f"Error: {e.format_message()}", err=True)
        if e.ctx is not None:
            click.echo(e.ctx.get_usage(), err=True)
        return 1
    except click.exceptions.Exit as e:
        return int(e.exit_code)
    except click.exceptions.Abort:
        return 1
    except click.exceptions.ClickException as e:
        e.show()
        return 1
    except NonFiniteLoss as e:
        click.echo(f"error: NonFiniteLoss: {e}", err=True)
        return 2
    except FaceAnimError as e:
        click.echo(f"error: {type(e).__name__}: {e}", err=True)
        return 2
    except OSError as e:
        click.echo(f"error: {e}", err=True)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
