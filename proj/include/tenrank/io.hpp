#pragma once

#include <iosfwd>
#include <string>

#include "tenrank/tensor.hpp"

namespace tenrank {

/// Binary tensor-series format "TFMS": magic bytes "TFMS", u32 version = 1,
/// u32 K, u32 T, K x u32 dims, then T * prod(dims) little-endian f64 with the
/// first mode varying fastest, one observation after another.
void write_tfms(std::ostream& out, const TensorSeries& series);
void write_tfms(const std::string& path, const TensorSeries& series);
TensorSeries read_tfms(std::istream& in);
TensorSeries read_tfms(const std::string& path);

enum class CsvLayout { long_form, wide_form, autodetect };

/// Long form: header "t,i1,...,iK,value", 1-based time and indices, one row per
/// cell. Wide form: a sidecar line "# dims: d1,d2,..." followed by the header
/// "t,v_1,...,v_{prod d}" with values in layout order. Missing or duplicate
/// cells are errors; no imputation.
TensorSeries ingest_csv(const std::string& path, CsvLayout layout = CsvLayout::autodetect);
TensorSeries ingest_csv_stream(std::istream& in, CsvLayout layout = CsvLayout::autodetect);

/// Long-form CSV emitter matching ingest_csv.
void write_csv(std::ostream& out, const TensorSeries& series);
void write_csv(const std::string& path, const TensorSeries& series);

}  // namespace tenrank
