"""``python -m jetex`` runs the ``jetex`` command."""

from __future__ import annotations

from jetex.runner import main

if __name__ == "__main__":
    raise SystemExit(main())
