"""Text coefficient files.

    #bkv1 weight2=<int> level=<int> chardisc=<int> prec=<int> label=<text>[ t=<int> at=<int> conv=<name>]
    0<TAB><int>
    1<TAB><int>
    ...

One line per index 0 <= n < prec, in order. The optional trailing fields
mark a Shimura lift; there ``weight2`` is twice the lift's weight (4k) and
``level`` is the level of the half-integral source.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from bkv.errors import FormatError, InvalidArgument
from bkv.forms import FormRecord
from bkv.qseries import QExpansion
from bkv.shimura import LiftRecord

MAGIC = "#bkv1"


def _body(expansion: QExpansion) -> str:
    return "".join(f"{n}\t{c}\n" for n, c in enumerate(expansion.coeffs))


def format_form(rec: FormRecord) -> str:
    head = (
        f"{MAGIC} weight2={rec.weight2} level={rec.level} chardisc={rec.char_disc} "
        f"prec={rec.prec} label={rec.label}\n"
    )
    return head + _body(rec.expansion)


def format_lift(L: LiftRecord) -> str:
    head = (
        f"{MAGIC} weight2={4 * L.k} level={L.level} chardisc={L.char_disc} "
        f"prec={L.lifted.prec} label={L.source_label} t={L.t} at={L.a_t} conv={L.convention}\n"
    )
    return head + _body(L.lifted)


def dumps(rec: FormRecord | LiftRecord) -> str:
    return format_lift(rec) if isinstance(rec, LiftRecord) else format_form(rec)


def _int(fields: dict, key: str) -> int:
    try:
        return int(fields[key])
    except KeyError:
        raise FormatError(f"header lacks {key}=") from None
    except ValueError:
        raise FormatError(f"header field {key}={fields[key]!r} is not an integer") from None


def loads(text: str) -> FormRecord | LiftRecord:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].startswith(MAGIC + " "):
        raise FormatError(f"missing '{MAGIC}' header")
    fields = {}
    for tok in lines[0].split()[1:]:
        key, sep, value = tok.partition("=")
        if not sep or key in fields:
            raise FormatError(f"malformed header token {tok!r}")
        fields[key] = value
    prec = _int(fields, "prec")
    if prec < 1 or len(lines) - 1 != prec:
        raise FormatError(f"header says prec={prec}, found {len(lines) - 1} coefficient lines")
    coeffs = []
    for n, line in enumerate(lines[1:]):
        idx, sep, value = line.partition("\t")
        if not sep or idx != str(n):
            raise FormatError(f"line {n + 2}: expected index {n}, got {line[:40]!r}")
        try:
            coeffs.append(int(value))
        except ValueError:
            raise FormatError(f"line {n + 2}: bad integer {value[:40]!r}") from None
    expansion = QExpansion(tuple(coeffs))
    weight2, level, disc = _int(fields, "weight2"), _int(fields, "level"), _int(fields, "chardisc")
    label = fields.get("label")
    if not label:
        raise FormatError("header lacks label=")
    try:
        if "t" in fields:
            conv = fields.get("conv", "shimura")
            if conv not in ("shimura", "kohnen") or weight2 % 4:
                raise FormatError(f"bad lift header (conv={conv}, weight2={weight2})")
            return LiftRecord(label, _int(fields, "t"), _int(fields, "at"), weight2 // 4,
                              level, disc, expansion, conv == "kohnen")
        return FormRecord(weight2, level, disc, expansion, label)
    except InvalidArgument as exc:
        raise FormatError(f"inconsistent header: {exc}") from None


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save(path, rec: FormRecord | LiftRecord) -> None:
    write_atomic(path, dumps(rec))


def load(path) -> FormRecord | LiftRecord:
    try:
        text = Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError:
        raise FormatError(f"{path}: not an ASCII coefficient file") from None
    return loads(text)
