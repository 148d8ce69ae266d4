#include "colliderbn/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace colliderbn {

namespace {

std::size_t scope_size(const std::vector<VariableRef>& scope) {
  std::size_t n = 1;
  for (const auto& v : scope) n *= v->cardinality();
  return n;
}

// Row-major strides, last variable fastest.
std::vector<std::size_t> strides_of(const std::vector<VariableRef>& scope) {
  std::vector<std::size_t> strides(scope.size(), 1);
  for (std::size_t i = scope.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * scope[i]->cardinality();
  }
  return strides;
}

bool same_variable(const VariableRef& a, const VariableRef& b) {
  return a == b || a->states == b->states;
}

}  // namespace

Factor::Factor() : values_{1.0} {}

Factor::Factor(std::vector<VariableRef> scope, std::vector<double> values)
    : scope_(std::move(scope)), values_(std::move(values)) {
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (!scope_[i]) throw Error(ErrorCode::InvalidArgument, "null variable in factor scope");
    for (std::size_t j = 0; j < i; ++j) {
      if (scope_[j]->id == scope_[i]->id) {
        throw Error(ErrorCode::InvalidArgument,
                    "variable '" + scope_[i]->id + "' appears twice in a factor scope");
      }
    }
  }
  if (values_.size() != scope_size(scope_)) {
    throw Error(ErrorCode::InvalidArgument, "factor has " + std::to_string(values_.size()) +
                                                " values, scope requires " +
                                                std::to_string(scope_size(scope_)));
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "factor values must be finite and non-negative");
    }
  }
}

Factor Factor::constant(double value) { return Factor({}, {value}); }

std::optional<std::size_t> Factor::position(std::string_view id) const {
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (scope_[i]->id == id) return i;
  }
  return std::nullopt;
}

double Factor::at(std::span<const std::size_t> states) const {
  if (states.size() != scope_.size()) {
    throw Error(ErrorCode::InvalidArgument, "state count does not match factor scope");
  }
  std::size_t offset = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] >= scope_[i]->cardinality()) {
      throw Error(ErrorCode::InvalidArgument, "state index out of range");
    }
    offset = offset * scope_[i]->cardinality() + states[i];
  }
  return values_[offset];
}

double Factor::at(std::initializer_list<std::string_view> states) const {
  if (states.size() != scope_.size()) {
    throw Error(ErrorCode::InvalidArgument, "state count does not match factor scope");
  }
  std::vector<std::size_t> indices;
  std::size_t i = 0;
  for (std::string_view name : states) {
    auto s = scope_[i]->state_index(name);
    if (!s) {
      throw Error(ErrorCode::UnknownState,
                  "variable '" + scope_[i]->id + "' has no state '" + std::string(name) + "'");
    }
    indices.push_back(*s);
    ++i;
  }
  return at(indices);
}

double Factor::total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

Factor factor_from_cpt(const Network& network, std::size_t variable) {
  std::vector<VariableRef> scope;
  for (std::size_t p : network.parents(variable)) scope.push_back(network.variable_ref(p));
  scope.push_back(network.variable_ref(variable));
  std::vector<double> values;
  values.reserve(scope_size(scope));
  for (const auto& row : network.cpt(variable).rows) {
    values.insert(values.end(), row.begin(), row.end());
  }
  return Factor(std::move(scope), std::move(values));
}

Factor multiply(const Factor& a, const Factor& b) {
  std::vector<VariableRef> scope = a.scope();
  std::vector<std::size_t> b_position(b.scope().size());
  for (std::size_t j = 0; j < b.scope().size(); ++j) {
    const auto& var = b.scope()[j];
    if (auto i = a.position(var->id)) {
      if (!same_variable(a.scope()[*i], var)) {
        throw Error(ErrorCode::StateSpaceMismatch,
                    "variable '" + var->id + "' has different states in the two factors");
      }
      b_position[j] = *i;
    } else {
      b_position[j] = scope.size();
      scope.push_back(var);
    }
  }

  // Stride of each result variable inside a and b (0 when absent).
  const auto a_strides = strides_of(a.scope());
  const auto b_strides = strides_of(b.scope());
  std::vector<std::size_t> a_step(scope.size(), 0), b_step(scope.size(), 0);
  for (std::size_t i = 0; i < a.scope().size(); ++i) a_step[i] = a_strides[i];
  for (std::size_t j = 0; j < b.scope().size(); ++j) b_step[b_position[j]] = b_strides[j];

  const std::size_t n = scope_size(scope);
  std::vector<double> values(n);
  std::vector<std::size_t> counter(scope.size(), 0);
  std::size_t ai = 0, bi = 0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = av[ai] * bv[bi];
    // Odometer increment, last variable fastest.
    for (std::size_t d = scope.size(); d-- > 0;) {
      if (++counter[d] < scope[d]->cardinality()) {
        ai += a_step[d];
        bi += b_step[d];
        break;
      }
      counter[d] = 0;
      ai -= a_step[d] * (scope[d]->cardinality() - 1);
      bi -= b_step[d] * (scope[d]->cardinality() - 1);
    }
  }
  return Factor(std::move(scope), std::move(values));
}

Factor sum_out(const Factor& f, std::string_view variable) {
  auto pos = f.position(variable);
  if (!pos) {
    throw Error(ErrorCode::NotInScope,
                "variable '" + std::string(variable) + "' is not in the factor's scope");
  }
  std::vector<VariableRef> scope = f.scope();
  const std::size_t card = scope[*pos]->cardinality();
  scope.erase(scope.begin() + static_cast<std::ptrdiff_t>(*pos));

  // Split the index into (outer, removed, inner) blocks.
  std::size_t inner = 1;
  for (std::size_t i = *pos + 1; i < f.scope().size(); ++i) inner *= f.scope()[i]->cardinality();
  const std::size_t outer = f.values().size() / (inner * card);

  std::vector<double> values(outer * inner, 0.0);
  const auto src = f.values();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < card; ++s) {
      const std::size_t base = (o * card + s) * inner;
      for (std::size_t i = 0; i < inner; ++i) values[o * inner + i] += src[base + i];
    }
  }
  return Factor(std::move(scope), std::move(values));
}

Factor reduce(const Factor& f, const Evidence& evidence) {
  const auto& old_scope = f.scope();
  std::vector<std::optional<std::size_t>> fixed(old_scope.size());
  std::vector<VariableRef> scope;
  for (std::size_t i = 0; i < old_scope.size(); ++i) {
    auto it = evidence.find(old_scope[i]->id);
    if (it == evidence.end()) {
      scope.push_back(old_scope[i]);
      continue;
    }
    auto s = old_scope[i]->state_index(it->second);
    if (!s) {
      throw Error(ErrorCode::UnknownState,
                  "variable '" + old_scope[i]->id + "' has no state '" + it->second + "'");
    }
    fixed[i] = *s;
  }
  if (scope.size() == old_scope.size()) return f;

  const auto strides = strides_of(old_scope);
  std::size_t base = 0;
  for (std::size_t i = 0; i < old_scope.size(); ++i) {
    if (fixed[i]) base += *fixed[i] * strides[i];
  }
  std::vector<std::size_t> free_strides;
  for (std::size_t i = 0; i < old_scope.size(); ++i) {
    if (!fixed[i]) free_strides.push_back(strides[i]);
  }

  const std::size_t n = scope_size(scope);
  std::vector<double> values(n);
  std::vector<std::size_t> counter(scope.size(), 0);
  std::size_t src = base;
  const auto old_values = f.values();
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = old_values[src];
    for (std::size_t d = scope.size(); d-- > 0;) {
      if (++counter[d] < scope[d]->cardinality()) {
        src += free_strides[d];
        break;
      }
      counter[d] = 0;
      src -= free_strides[d] * (scope[d]->cardinality() - 1);
    }
  }
  return Factor(std::move(scope), std::move(values));
}

}  // namespace colliderbn
