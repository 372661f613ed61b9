import logging
import sys

LOG_LEVELS = {0: logging.WARNING, 1: logging.INFO}


def configure_logging(verbosity: int):
    logging.basicConfig(
        level=LOG_LEVELS.get(verbosity, logging.DEBUG),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: list[str] | None = None):
    from quaddt.cli import parse_args

    args = parse_args(argv)
    configure_logging(args.verbose)
    sys.exit(args.handler(args))


if __name__ == "__main__":
    main()
