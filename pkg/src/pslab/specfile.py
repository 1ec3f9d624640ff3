"""The ``.spec`` file format and the inline ``{P} C {Q}`` triple syntax.

A spec file is a list of sections, each introduced by ``name:`` at the
start of a line and running until the next section::

    pre:     top
    program: X := X mod 2        # or: program: @prog.pw
    post:    [X = 0 || X = 1]
    frame:   [Y = 0 || Y = 1]    # optional
    input:   1/2 {X:0} + 1/2 {X:1}   # optional
    mode:    absorb(1000)        # optional: bounded(N) | absorb(N)

Lines whose first non-blank character is ``#`` are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .assertions import Assertion, parse_assertion
from .lang.parser import parse_program
from .semantics import Mode
from .speccheck import Spec, apply_frame
from .state import RandomState, parse_random_state

__all__ = ["SpecFile", "SpecFormatError", "load_spec", "parse_mode", "parse_spec_text", "parse_triple"]

SECTIONS = ("pre", "program", "post", "frame", "input", "mode")
_HEADER = re.compile(r"^(%s)\s*:(.*)$" % "|".join(SECTIONS))
_MODE = re.compile(r"\s*(bounded|absorb)\s*\(\s*(\d+)\s*\)\s*\Z")


class SpecFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SpecFile:
    spec: Spec
    frame: Assertion | None = None
    input: RandomState | None = None
    mode: Mode | None = None

    def framed(self) -> Spec:
        """The spec with the frame applied, if the file declares one."""
        return self.spec if self.frame is None else apply_frame(self.spec, self.frame)


def parse_mode(text: str) -> Mode:
    m = _MODE.match(text)
    if not m:
        raise SpecFormatError(f"bad mode {text.strip()!r}; expected bounded(N) or absorb(N)")
    return Mode(m.group(1), int(m.group(2)))


def _sections(text: str) -> dict[str, str]:
    found: dict[str, list[str]] = {}
    current = None
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.lstrip().startswith("#"):
            continue
        m = _HEADER.match(line)
        if m:
            current = m.group(1)
            if current in found:
                raise SpecFormatError(f"line {lineno}: section {current!r} given twice")
            found[current] = [m.group(2)]
        elif line.strip():
            if current is None:
                raise SpecFormatError(f"line {lineno}: text before the first section")
            found[current].append(line)
    return {k: "\n".join(v).strip() for k, v in found.items()}


def _uncomment(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines()).strip()


def parse_spec_text(text: str, base_dir: str | Path = ".") -> SpecFile:
    sections = _sections(text)
    for required in ("pre", "program", "post"):
        if required not in sections:
            raise SpecFormatError(f"missing section {required!r}")
    program_text = sections["program"]
    if program_text.startswith("@"):
        program_text = (Path(base_dir) / program_text[1:].strip()).read_text(encoding="utf-8")
    spec = Spec(parse_assertion(sections["pre"]), parse_program(program_text),
                parse_assertion(sections["post"]))
    return SpecFile(
        spec=spec,
        frame=parse_assertion(sections["frame"]) if "frame" in sections else None,
        input=parse_random_state(_uncomment(sections["input"])) if "input" in sections else None,
        mode=parse_mode(_uncomment(sections["mode"])) if "mode" in sections else None,
    )


def load_spec(path: str | Path) -> SpecFile:
    path = Path(path)
    return parse_spec_text(path.read_text(encoding="utf-8"), path.parent)


def _matching(text: str, start: int) -> int:
    depth = 0
    for i in range(start, len(text)):
        if text[i] == "{":
            depth += 1
        elif text[i] == "}":
            depth -= 1
            if depth == 0:
                return i
    raise SpecFormatError("unbalanced braces in triple")


def parse_triple(text: str) -> Spec:
    """Parse ``{P} C {Q}``."""
    text = text.strip()
    if not text.startswith("{") or not text.endswith("}"):
        raise SpecFormatError("a triple has the form {P} C {Q}")
    pre_end = _matching(text, 0)
    depth = 0
    post_start = None
    for i in range(len(text) - 1, pre_end, -1):
        if text[i] == "}":
            depth += 1
        elif text[i] == "{":
            depth -= 1
            if depth == 0:
                post_start = i
                break
    if post_start is None:
        raise SpecFormatError("unbalanced braces in triple")
    return Spec(
        parse_assertion(text[1:pre_end]),
        parse_program(text[pre_end + 1:post_start]),
        parse_assertion(text[post_start + 1:-1]),
    )
