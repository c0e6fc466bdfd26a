#!/usr/bin/env python3
from app.cli import run


def main() -> int:
    return run()


if __name__ == "__main__":
    exit(main())
