#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ubcov/data.hpp"
#include "ubcov/partition.hpp"

namespace ubcov::cli {

/// Unreadable, unwritable or malformed input/output file (exit code 4).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Numeric CSV (comma separated, optional double quotes around a field,
/// '.' decimal point, CRLF tolerated, trailing blank lines ignored).
/// Errors name the 1-based line and column.
DataMatrix parse_csv(const std::string& text, bool header);
DataMatrix load_data(const std::string& path, bool header);

/// Whitespace- or comma-separated positive integers, or a JSON integer array.
PartitionVector parse_partition(const std::string& text);
PartitionVector load_partition(const std::string& path);

/// 0-based column indices forming a permutation of 0..count-1, same text
/// format as a partition file.
std::vector<std::size_t> load_permutation(const std::string& path, std::size_t count);
DataMatrix permute_columns(const DataMatrix& x, const std::vector<std::size_t>& order);

}  // namespace ubcov::cli
