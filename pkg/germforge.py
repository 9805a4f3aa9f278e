"""Direct entry point for the germforge command line."""

from germforge.cli import main


if __name__ == "__main__":
    raise SystemExit(main())
