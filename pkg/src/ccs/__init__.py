"""ccs: parse PDFs into text cells, label them, and assemble structured JSON.

The pipeline stages are exposed as subpackages:

- ccs.model:          shared document data model and canonical serialization
- ccs.parser:         PDF bytes -> ParsedDocument (cell normalization)
- ccs.ml:             template-specific random-forest cell classifiers
- ccs.detect:         layout rasters, detector evaluation, heuristic baseline
- ccs.assemble:       labeled cells -> structured JSON output
- ccs.orchestration:  broker, workers, task chaining, scaling bench
- ccs.service:        REST API, object store, metadata index, annotations
"""

__version__ = "0.1.0"
