#include "colliderbn/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>

namespace colliderbn {

namespace {

struct Cell {
  std::string text;
  SourceLocation where;
};

// RFC 4180 records. Quoted fields may hold commas, CRLF and doubled quotes.
std::vector<std::vector<Cell>> split_csv(std::string_view csv) {
  std::vector<std::vector<Cell>> records;
  std::vector<Cell> record;
  Cell cell;
  SourceLocation pos;
  bool in_quotes = false;
  bool was_quoted = false;
  bool at_field_start = true;

  auto end_field = [&] {
    record.push_back(std::move(cell));
    cell = Cell{{}, pos};
    was_quoted = false;
    at_field_start = true;
  };
  auto end_record = [&] {
    end_field();
    // Skip blank lines.
    if (!(record.size() == 1 && record[0].text.empty())) records.push_back(std::move(record));
    record.clear();
  };

  cell.where = pos;
  for (std::size_t i = 0; i < csv.size(); ++i) {
    const char c = csv[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < csv.size() && csv[i + 1] == '"') {
          cell.text += '"';
          ++i;
          ++pos.column;
        } else {
          in_quotes = false;
        }
      } else {
        cell.text += c;
      }
      if (c == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      continue;
    }
    if (c == '"') {
      if (!at_field_start) {
        throw Error(ErrorCode::Syntax, "quote inside an unquoted field", pos, "\"");
      }
      in_quotes = true;
      was_quoted = true;
      at_field_start = false;
      ++pos.column;
      continue;
    }
    if (c == ',') {
      ++pos.column;
      end_field();
      continue;
    }
    if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < csv.size() && csv[i + 1] == '\n') ++i;
      ++pos.line;
      pos.column = 1;
      end_record();
      continue;
    }
    if (was_quoted) {
      throw Error(ErrorCode::Syntax, "text after a closing quote", pos, std::string(1, c));
    }
    cell.text += c;
    at_field_start = false;
    ++pos.column;
  }
  if (in_quotes) throw Error(ErrorCode::Syntax, "unterminated quoted field", pos);
  if (!at_field_start || !record.empty()) end_record();
  return records;
}

std::size_t column_of(const RecordTable& records, std::string_view id) {
  auto it = std::find(records.columns.begin(), records.columns.end(), id);
  if (it == records.columns.end()) {
    throw Error(ErrorCode::MissingColumn, "record table has no column '" + std::string(id) + "'");
  }
  return static_cast<std::size_t>(it - records.columns.begin());
}

const DiscreteVariable& variable_of(std::span<const DiscreteVariable> variables,
                                    std::string_view id) {
  for (const auto& v : variables) {
    if (v.id == id) return v;
  }
  throw Error(ErrorCode::UnknownVariable, "unknown variable '" + std::string(id) + "'");
}

}  // namespace

RecordTable parse_records(std::string_view csv) {
  auto lines = split_csv(csv);
  if (lines.empty()) throw Error(ErrorCode::Syntax, "record table has no header row", SourceLocation{});

  RecordTable table;
  for (auto& cell : lines.front()) table.columns.push_back(std::move(cell.text));
  const bool has_count = !table.columns.empty() && table.columns.back() == "count";
  if (has_count) table.columns.pop_back();
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (table.columns[c].empty()) {
      throw Error(ErrorCode::Syntax, "empty column name", lines.front()[c].where);
    }
    if (std::find(table.columns.begin(), table.columns.begin() + static_cast<std::ptrdiff_t>(c),
                  table.columns[c]) != table.columns.begin() + static_cast<std::ptrdiff_t>(c)) {
      throw Error(ErrorCode::Syntax, "duplicate column '" + table.columns[c] + "'",
                  lines.front()[c].where, table.columns[c]);
    }
  }

  const std::size_t width = lines.front().size();
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto& line = lines[r];
    if (line.size() != width) {
      throw Error(ErrorCode::Syntax,
                  "record has " + std::to_string(line.size()) + " fields, header has " +
                      std::to_string(width),
                  line.front().where);
    }
    std::uint64_t count = 1;
    if (has_count) {
      const Cell& cell = line.back();
      const char* first = cell.text.data();
      const char* last = first + cell.text.size();
      auto [ptr, ec] = std::from_chars(first, last, count);
      if (ec != std::errc() || ptr != last || cell.text.empty()) {
        throw Error(ErrorCode::Syntax, "count must be a non-negative integer", cell.where,
                    cell.text);
      }
      line.pop_back();
    }
    std::vector<std::string> row;
    row.reserve(line.size());
    for (auto& cell : line) row.push_back(std::move(cell.text));
    table.rows.push_back(std::move(row));
    table.counts.push_back(count);
  }
  return table;
}

void check_records(const RecordTable& records, std::span<const DiscreteVariable> variables) {
  std::vector<const DiscreteVariable*> column_vars;
  for (const auto& column : records.columns) column_vars.push_back(&variable_of(variables, column));
  for (std::size_t r = 0; r < records.rows.size(); ++r) {
    for (std::size_t c = 0; c < records.columns.size(); ++c) {
      const std::string& cell = records.rows[r][c];
      if (!column_vars[c]->state_index(cell)) {
        // Header is line 1; assumes one physical line per record.
        throw Error(ErrorCode::UnknownState,
                    "'" + cell + "' is not a state of '" + records.columns[c] + "'",
                    SourceLocation{r + 2, c + 1}, cell);
      }
    }
  }
}

Cpt cpt_from_counts(const RecordTable& records, std::span<const DiscreteVariable> variables,
                    std::string_view child, std::span<const std::string> parents,
                    double smoothing) {
  if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) {
    throw Error(ErrorCode::InvalidArgument, "smoothing must be a non-negative number");
  }
  const DiscreteVariable& child_var = variable_of(variables, child);
  const std::size_t child_col = column_of(records, child);
  std::vector<const DiscreteVariable*> parent_vars;
  std::vector<std::size_t> parent_cols;
  std::size_t configurations = 1;
  for (const auto& p : parents) {
    parent_vars.push_back(&variable_of(variables, p));
    parent_cols.push_back(column_of(records, p));
    configurations *= parent_vars.back()->cardinality();
  }

  const std::size_t width = child_var.cardinality();
  std::vector<std::vector<double>> counts(configurations, std::vector<double>(width, 0.0));
  for (std::size_t r = 0; r < records.rows.size(); ++r) {
    const auto& row = records.rows[r];
    std::size_t config = 0;
    for (std::size_t i = 0; i < parents.size(); ++i) {
      auto s = parent_vars[i]->state_index(row[parent_cols[i]]);
      if (!s) {
        throw Error(ErrorCode::UnknownState, "'" + row[parent_cols[i]] + "' is not a state of '" +
                                                 parent_vars[i]->id + "'");
      }
      config = config * parent_vars[i]->cardinality() + *s;
    }
    auto s = child_var.state_index(row[child_col]);
    if (!s) {
      throw Error(ErrorCode::UnknownState,
                  "'" + row[child_col] + "' is not a state of '" + child_var.id + "'");
    }
    counts[config][*s] += static_cast<double>(records.counts[r]);
  }

  Cpt cpt;
  cpt.child = std::string(child);
  cpt.parents.assign(parents.begin(), parents.end());
  for (std::size_t config = 0; config < configurations; ++config) {
    double total = 0.0;
    for (double c : counts[config]) total += c;
    const double denominator = total + smoothing * static_cast<double>(width);
    if (denominator == 0.0) {
      throw Error(ErrorCode::EmptyConfiguration,
                  "no records for parent configuration " + std::to_string(config) + " of '" +
                      std::string(child) + "' and smoothing is 0");
    }
    std::vector<double> row;
    row.reserve(width);
    for (double c : counts[config]) row.push_back((c + smoothing) / denominator);
    cpt.rows.push_back(std::move(row));
  }
  return cpt;
}

Network fit_network(const NetworkSkeleton& skeleton, const RecordTable& records,
                    double smoothing) {
  check_records(records, skeleton.variables);
  NetworkDefinition def;
  def.name = skeleton.name;
  def.variables = skeleton.variables;
  def.metadata = skeleton.metadata;
  for (std::size_t i = 0; i < skeleton.variables.size(); ++i) {
    for (const auto& parent : skeleton.parents[i]) {
      def.edges.emplace_back(parent, skeleton.variables[i].id);
    }
    Cpt cpt = cpt_from_counts(records, skeleton.variables, skeleton.variables[i].id,
                              skeleton.parents[i], smoothing);
    // Stored at serialization precision so the written file reloads to the same network.
    for (auto& row : cpt.rows) {
      for (auto& p : row) p = canonical_probability(p);
    }
    def.cpts.push_back(std::move(cpt));
  }
  return Network::create(std::move(def));
}

}  // namespace colliderbn
