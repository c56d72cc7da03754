from sketchlab.io.results import emit_document, emit_results, format_csv, format_json, load_results_csv, parse_csv
from sketchlab.io.tensor_file import (
    decode_tensor,
    encode_tensor,
    load_tensor_file,
    load_tensor_file_with_kind,
    save_tensor_file,
)
