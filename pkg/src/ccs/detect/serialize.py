"""detections.v1 wire format."""

from __future__ import annotations

import json

from ..errors import SchemaViolationError
from ..model.serialize import _F, _Walker, _parse_bbox, canonical_json_bytes
from .types import Detection

DETECTIONS_FORMAT = "detections.v1"


def detections_to_bytes(pages: dict[int, list[Detection]]) -> bytes:
    payload = {
        "format": DETECTIONS_FORMAT,
        "schema_version": 1,
        "pages": [
            {
                "page_number": n,
                "detections": [
                    {
                        "bbox": [_F(d.bbox.x0), _F(d.bbox.y0), _F(d.bbox.x1), _F(d.bbox.y1)],
                        "class": d.klass,
                        "confidence": d.confidence,
                    }
                    for d in dets
                ],
            }
            for n, dets in sorted(pages.items())
        ],
    }
    return canonical_json_bytes(payload)


def detections_from_bytes(data: bytes) -> dict[int, list[Detection]]:
    try:
        payload = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaViolationError(f"not valid JSON: {exc}", path="$") from None
    w = _Walker
    if not isinstance(payload, dict) or payload.get("format") != DETECTIONS_FORMAT:
        raise SchemaViolationError(f"expected {DETECTIONS_FORMAT}", path="$.format")
    if payload.get("schema_version") != 1:
        raise SchemaViolationError("unsupported schema version", path="$.schema_version")
    out: dict[int, list[Detection]] = {}
    for pi, page_raw in enumerate(w.get(payload, "pages", list, "$")):
        p = f"$.pages[{pi}]"
        number = w.get(page_raw, "page_number", int, p)
        dets = []
        for di, raw in enumerate(w.get(page_raw, "detections", list, p)):
            dp = f"{p}.detections[{di}]"
            confidence = w.get(raw, "confidence", float, dp)
            if not (0.0 <= confidence <= 1.0):
                w.fail(f"{dp}.confidence", "confidence outside [0, 1]")
            dets.append(
                Detection(
                    bbox=_parse_bbox(w.get(raw, "bbox", list, dp), f"{dp}.bbox"),
                    confidence=confidence,
                    klass=w.get(raw, "class", str, dp),
                )
            )
        out[number] = dets
    return out
