#ifndef PFTG_SNAPSHOT_IO_HPP
#define PFTG_SNAPSHOT_IO_HPP

#include <string>

#include "pftg/diagnostics.hpp"

namespace pftg {

/// Binary state snapshot, little-endian:
///   magic "PFTG1" (5 bytes), u8 dim, u64 n per axis, f64 length per axis,
///   f64 t, then the mu, u, sigma arrays as f64 in x-fastest order.
/// Round-trips bit-exactly.
void write_snapshot(const State& state, const std::string& path);

State read_snapshot(const std::string& path);

/// read_snapshot + GridMismatch check against an expected grid.
State read_snapshot(const std::string& path, const Grid& expected);

/// Appends one CSV row (writes the fixed header first when the file is new or
/// empty). Values carry 17 significant digits so a reparse is lossless.
void append_timeseries(const DiagnosticsRecord& record, const std::string& path);

extern const char* const kTimeseriesHeader;

/// Parses a CSV produced by append_timeseries.
std::vector<DiagnosticsRecord> read_timeseries(const std::string& path);

} // namespace pftg

#endif
