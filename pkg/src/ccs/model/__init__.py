from .types import (
    DEFAULT_LABELS,
    PARSED_DOCUMENT_FORMAT,
    SCHEMA_VERSION,
    STRUCTURED_DOCUMENT_FORMAT,
    BBox,
    CellStyle,
    Description,
    DocumentObject,
    ImageObject,
    Label,
    LabelSet,
    PageGeometry,
    ParsedDocument,
    ParsedPage,
    PathSegment,
    Provenance,
    StructuredDocument,
    TableObject,
    TextCell,
    quantize,
)
from .validate import validate
from .serialize import (
    canonical_json_bytes,
    deserialize,
    label_set_from_list,
    label_set_to_list,
    parsed_from_dict,
    parsed_to_dict,
    serialize,
    structured_from_dict,
    structured_to_dict,
)

__all__ = [
    "BBox",
    "CellStyle",
    "DEFAULT_LABELS",
    "Description",
    "DocumentObject",
    "ImageObject",
    "Label",
    "LabelSet",
    "PARSED_DOCUMENT_FORMAT",
    "PageGeometry",
    "ParsedDocument",
    "ParsedPage",
    "PathSegment",
    "Provenance",
    "SCHEMA_VERSION",
    "STRUCTURED_DOCUMENT_FORMAT",
    "StructuredDocument",
    "TableObject",
    "TextCell",
    "canonical_json_bytes",
    "deserialize",
    "label_set_from_list",
    "label_set_to_list",
    "parsed_from_dict",
    "parsed_to_dict",
    "quantize",
    "serialize",
    "structured_from_dict",
    "structured_to_dict",
    "validate",
]
