#ifndef GWASYM_TABLE_IO_HPP
#define GWASYM_TABLE_IO_HPP

#include "gwasym/invariants.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gwasym {

class CacheCorruptError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// FNV-1a over the payload; the header stores it for corruption detection.
std::uint64_t fnv1a64(const std::string& data);

// One record per line. Exact entries: "<genus> <d> <num> <den>".
// Scaled entries: "<genus> <d> <log_value> <mantissa_hex> <precision_bits>".
// The first line is a checksummed header. Writes go through a temporary
// file plus atomic rename.
void write_exact_table(const std::string& path, const InvariantTable& t, int dmax);
void write_scaled_table(const std::string& path, const InvariantTable& t, int dmax);

/// Serialize (truncated to dmax) without touching the filesystem.
std::string exact_table_text(const InvariantTable& t, int dmax);
std::string scaled_table_text(const InvariantTable& t, int dmax);

/// Read a table file; the result carries only the side (exact or scaled)
/// stored in the file. Throws CacheCorruptError on checksum mismatch.
InvariantTable read_table_file(const std::string& path);

/// Move the scaled side of `src` into `dst` (same genus required).
void merge_scaled(InvariantTable& dst, InvariantTable&& src);

} // namespace gwasym

#endif
