"""
Émission des résultats en CSV ou JSON.

Les réels sont écrits avec 12 chiffres significatifs ; les en-têtes CSV
portent l'unité entre crochets ([z] pour les longueurs du plan, [t] pour
Re z₂, [1] pour les grandeurs sans dimension).
"""

import csv
import io
import json
import math
import sys
from contextlib import contextmanager
from typing import Any, Iterable, Iterator, List, Optional, Sequence, TextIO

from ..core.config import OUTPUT_FORMATS
from ..core.exceptions import InvalidArgument

SIGNIFICANT_DIGITS = 12


def format_number(value: Any) -> str:
    """Représentation CSV d'une valeur scalaire."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def normalize(obj: Any) -> Any:
    """Arrondit récursivement les réels et convertit les complexes en [x, y]."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return format_number(obj)
        return float(f"{obj:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(obj, complex):
        return [normalize(obj.real), normalize(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if hasattr(obj, "item"):
        return normalize(obj.item())
    if hasattr(obj, "tolist"):
        return normalize(obj.tolist())
    return str(obj)


class Emitter:
    """Écrit tables et documents vers la sortie standard ou un fichier."""

    def __init__(self, output_format: str = "csv", path: Optional[str] = None):
        if output_format not in OUTPUT_FORMATS:
            raise InvalidArgument(f"output format must be one of {', '.join(OUTPUT_FORMATS)}, got '{output_format}'")
        self.output_format = output_format
        self.path = path

    @contextmanager
    def _stream(self) -> Iterator[TextIO]:
        if self.path is None:
            yield sys.stdout
            sys.stdout.flush()
        else:
            with open(self.path, "w", encoding="utf-8", newline="") as f:
                yield f

    def render_table(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        rows = [list(r) for r in rows]
        if self.output_format == "json":
            records = [dict(zip(header, r)) for r in rows]
            return json.dumps(normalize(records), indent=2, sort_keys=False) + "\n"
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_number(v) for v in row])
        return buffer.getvalue()

    def table(self, header: Sequence[str], rows: Iterable[Sequence[Any]]):
        text = self.render_table(header, rows)
        with self._stream() as out:
            out.write(text)

    def document(self, obj: Any):
        """Documents structurés (stockyard, cycles, rapport) : toujours en JSON."""
        with self._stream() as out:
            out.write(json.dumps(normalize(obj), indent=2) + "\n")


def parse_floats(text: str, count: Optional[int] = None, name: str = "value") -> List[float]:
    """Liste de réels séparés par des virgules ; count impose leur nombre."""
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InvalidArgument(f"{name} must be comma-separated numbers, got '{text}'")
    if count is not None and len(values) != count:
        raise InvalidArgument(f"{name} needs {count} comma-separated numbers, got '{text}'")
    if not all(math.isfinite(v) for v in values):
        raise InvalidArgument(f"{name} must be finite, got '{text}'")
    return values
