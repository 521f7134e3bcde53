import argparse
import os
import sys

from .app import ModelLoadError, serve
from .config import DEVICE_ENV_VAR, SidecarConfig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="inference-sidecar",
        description="Serve detection, segmentation, depth, tracking, and judge "
                    "models behind the evaluation wire protocol.",
    )
    parser.add_argument("--config", default=None, help="JSON config file")
    parser.add_argument("--port", type=int, default=None)
    parser.add_argument("--device", default=None,
                        help=f"overrides ${DEVICE_ENV_VAR} and the config file")
    parser.add_argument("--stub", action="store_true", help="deterministic stub mode")
    parser.add_argument("--model", action="append", default=[], metavar="TASK=ID",
                        help="model identifier per task (repeatable)")
    args = parser.parse_args(argv)

    if args.config:
        config = SidecarConfig.from_file(args.config)
    else:
        config = SidecarConfig(stub_mode=args.stub)
    overrides = {}
    if args.port is not None:
        overrides["port"] = args.port
    if args.stub:
        overrides["stub_mode"] = True
    device = args.device or os.environ.get(DEVICE_ENV_VAR)
    if device:
        overrides["device"] = device
    if args.model:
        models = dict(config.models)
        for entry in args.model:
            task, _, identifier = entry.partition("=")
            if not identifier:
                parser.error(f"--model needs TASK=ID, got {entry!r}")
            models[task] = identifier
        overrides["models"] = models
    if overrides:
        from dataclasses import replace
        config = replace(config, **overrides)

    try:
        serve(config)
    except ModelLoadError as exc:
        print(f"startup failed: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
