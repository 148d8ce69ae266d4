#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colliderbn/model_io.hpp"
#include "colliderbn/network.hpp"

namespace colliderbn {

/// Tabular observations, one column per variable, cells holding state names.
/// Each row stands for `counts[i]` identical records (1 without a count column).
struct RecordTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::uint64_t> counts;
};

/// RFC 4180 CSV with a header row. A trailing column named "count" holds
/// non-negative integer multiplicities. Throws Error(Syntax) with location.
RecordTable parse_records(std::string_view csv);

/// Every column must be a declared variable and every cell one of its states.
/// Throws Error(UnknownVariable / UnknownState) positioned at the cell.
void check_records(const RecordTable& records, std::span<const DiscreteVariable> variables);

/// Laplace-smoothed frequency estimate of P(child | parents):
/// (count + smoothing) / (row total + smoothing * child state count).
/// Errors: MissingColumn, EmptyConfiguration (a parent configuration with no
/// records while smoothing is 0), InvalidArgument (negative smoothing).
Cpt cpt_from_counts(const RecordTable& records, std::span<const DiscreteVariable> variables,
                    std::string_view child, std::span<const std::string> parents,
                    double smoothing);

/// Fits every table of the skeleton from the records and validates the result.
Network fit_network(const NetworkSkeleton& skeleton, const RecordTable& records, double smoothing);

}  // namespace colliderbn
