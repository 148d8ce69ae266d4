#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "colliderbn/network.hpp"

namespace colliderbn {

/// Non-negative table over a scope of discrete variables. Values are stored
/// row-major over the scope's state indices, first scope variable slowest.
/// The empty scope holds a single value.
class Factor {
 public:
  /// Empty scope, value 1 (the multiplicative identity).
  Factor();
  /// Throws Error(InvalidArgument) on a size mismatch, a negative or
  /// non-finite value, or a variable repeated in the scope.
  Factor(std::vector<VariableRef> scope, std::vector<double> values);

  static Factor constant(double value);

  const std::vector<VariableRef>& scope() const { return scope_; }
  std::span<const double> values() const { return values_; }

  std::optional<std::size_t> position(std::string_view id) const;
  /// Value at one state index per scope variable.
  double at(std::span<const std::size_t> states) const;
  /// Value at one state name per scope variable.
  double at(std::initializer_list<std::string_view> states) const;
  double total() const;

 private:
  std::vector<VariableRef> scope_;
  std::vector<double> values_;
};

/// Scope = parents followed by the child.
Factor factor_from_cpt(const Network& network, std::size_t variable);

/// Scope = a's scope followed by b's variables not in a.
/// Throws Error(StateSpaceMismatch) when a shared id has different states.
Factor multiply(const Factor& a, const Factor& b);

/// Throws Error(NotInScope).
Factor sum_out(const Factor& f, std::string_view variable);

/// Slices out observed variables. Evidence on variables outside the scope is
/// ignored. Throws Error(UnknownState) for a state the variable lacks.
Factor reduce(const Factor& f, const Evidence& evidence);

}  // namespace colliderbn
