"""Serve the inference endpoints: python -m emoaug_sidecar [flags]."""

import argparse

from .app import serve
from .config import ServiceConfig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="emoaug-sidecar", description=__doc__)
    parser.add_argument("--fill-mask-model", help="masked-LM model id or path")
    parser.add_argument("--en-fr-model", help="en->fr translation model id or path")
    parser.add_argument("--fr-en-model", help="fr->en translation model id or path")
    parser.add_argument("--classifier-model", help="multi-label emotion classifier id or path")
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--echo", action="store_true", help="serve echo responses without loading models")
    parser.add_argument(
        "--sampling",
        action="store_true",
        help="honor translate seeds with sampled decoding instead of greedy",
    )
    args = parser.parse_args(argv)
    config = ServiceConfig(
        fill_mask_model=args.fill_mask_model,
        en_fr_model=args.en_fr_model,
        fr_en_model=args.fr_en_model,
        classifier_model=args.classifier_model,
        device=args.device,
        port=args.port,
        echo=args.echo,
        deterministic=not args.sampling,
    )
    if not config.configured_roles():
        parser.error("configure at least one model, or pass --echo")
    serve(config)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
