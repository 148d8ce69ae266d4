#include "colliderbn/fixtures.hpp"

#include <cmath>

#include "colliderbn/model_io.hpp"

namespace colliderbn {

namespace {

const std::vector<std::string> kBoolean = {"true", "false"};

DiscreteVariable boolean(std::string id, std::string label) {
  return {std::move(id), std::move(label), kBoolean};
}

std::vector<double> bernoulli(double p) {
  return {canonical_probability(p), canonical_probability(1.0 - p)};
}

void add_cpt(NetworkDefinition& def, std::string child, std::vector<std::string> parents,
             const std::vector<double>& p_true) {
  Cpt cpt{std::move(child), std::move(parents), {}};
  for (double p : p_true) cpt.rows.push_back(bernoulli(p));
  for (const auto& parent : cpt.parents) def.edges.emplace_back(parent, cpt.child);
  def.cpts.push_back(std::move(cpt));
}

void check_probability(double p, std::string_view what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " must lie in [0, 1], got " + format_probability(p));
  }
}

constexpr double kSimpleBaseline = 0.10;
constexpr double kHealthcare = 0.05;
// P(tested = true | healthcare, covid19), shared by every healthcare model.
void add_healthcare_testing(NetworkDefinition& def) {
  add_cpt(def, "tested", {"healthcare", "covid19"}, {0.99, 0.10, 0.15, 0.01});
}

}  // namespace

Network build_simple_smoking(double p_covid_given_smoker) {
  check_probability(p_covid_given_smoker, "P(covid19 | smoker)");
  const bool null_model = p_covid_given_smoker == kSimpleBaseline;
  NetworkDefinition def;
  if (null_model) {
    def.name = "simple-smoking";
  } else if (p_covid_given_smoker == 0.11) {
    def.name = "simple-smoking-reversal";
  } else {
    def.name = "simple-smoking-p" + format_probability(p_covid_given_smoker);
  }
  def.variables = {boolean("smoker", "Smoker"), boolean("covid19", "COVID-19"),
                   boolean("tested", "Tested")};
  add_cpt(def, "smoker", {}, {0.27});
  if (null_model) {
    add_cpt(def, "covid19", {}, {kSimpleBaseline});
  } else {
    add_cpt(def, "covid19", {"smoker"}, {p_covid_given_smoker, kSimpleBaseline});
  }
  add_cpt(def, "tested", {"smoker", "covid19"}, {0.10, 0.05, 0.25, 0.10});
  return Network::create(std::move(def));
}

Network build_realistic_smoking(double relative_risk) {
  if (!(relative_risk >= 0.0) || !std::isfinite(relative_risk)) {
    throw Error(ErrorCode::InvalidArgument, "relative risk must be a non-negative number");
  }
  const double healthcare_smoker = 0.03 * relative_risk;
  const double public_smoker = 0.01 * relative_risk;
  check_probability(healthcare_smoker, "P(covid19 | healthcare, smoker)");

  const bool null_model = relative_risk == 1.0;
  NetworkDefinition def;
  if (null_model) {
    def.name = "realistic-smoking";
  } else if (relative_risk == 1.02) {
    def.name = "realistic-smoking-rr102";
  } else {
    def.name = "realistic-smoking-rr" + format_probability(relative_risk);
  }
  def.variables = {boolean("healthcare", "Healthcare worker"), boolean("smoker", "Smoker"),
                   boolean("covid19", "COVID-19"), boolean("tested", "Tested")};
  add_cpt(def, "healthcare", {}, {kHealthcare});
  add_cpt(def, "smoker", {"healthcare"}, {0.14, 0.28});
  if (null_model) {
    add_cpt(def, "covid19", {"healthcare"}, {0.03, 0.01});
  } else {
    add_cpt(def, "covid19", {"healthcare", "smoker"},
            {healthcare_smoker, 0.03, public_smoker, 0.01});
  }
  add_healthcare_testing(def);
  return Network::create(std::move(def));
}

Network build_exposure_model(const ExposureModelParameters& p) {
  NetworkDefinition def;
  def.name = p.name;
  def.metadata = p.metadata;
  def.variables = {boolean("healthcare", "Healthcare worker"),
                   boolean(p.exposure, p.exposure_label), boolean("covid19", "COVID-19"),
                   boolean("tested", "Tested")};
  add_cpt(def, "healthcare", {}, {kHealthcare});
  add_cpt(def, p.exposure, {"healthcare"}, {p.exposure_given_healthcare, p.exposure_given_public});
  add_cpt(def, "covid19", {"healthcare", p.exposure},
          {p.covid_healthcare_exposed, p.covid_healthcare_unexposed, p.covid_public_exposed,
           p.covid_public_unexposed});
  add_healthcare_testing(def);
  return Network::create(std::move(def));
}

ExposureModelParameters stress_parameters() {
  ExposureModelParameters p;
  p.name = "stress";
  p.exposure = "stress";
  p.exposure_label = "Stress";
  p.exposure_given_healthcare = 0.59;
  p.exposure_given_public = 0.06;
  p.covid_healthcare_exposed = 0.008;
  p.covid_healthcare_unexposed = 0.002;
  p.covid_public_exposed = 0.021;
  p.covid_public_unexposed = 0.015;
  p.metadata = {
      {"parameters", "calibrated by tools/calibrate_fixtures, not measured"},
      {"calibration_grid",
       "exposure prevalence step 0.01, covid19 step 0.001 up to 0.04; stress raises covid19 in "
       "both healthcare strata; healthcare raises stress"},
      {"target_tested_exposed", "0.106"},
      {"target_tested_unexposed", "0.159"},
      {"achieved_tested_exposed", "0.106010847645"},
      {"achieved_tested_unexposed", "0.159003520845"},
  };
  return p;
}

ExposureModelParameters contact_parameters() {
  ExposureModelParameters p;
  p.name = "contact";
  p.exposure = "contact";
  p.exposure_label = "Contact with COVID-19 patients";
  p.exposure_given_healthcare = 0.75;
  p.exposure_given_public = 0.01;
  p.covid_healthcare_exposed = 0.006;
  p.covid_healthcare_unexposed = 0.005;
  p.covid_public_exposed = 0.033;
  p.covid_public_unexposed = 0.006;
  p.metadata = {
      {"parameters", "calibrated by tools/calibrate_fixtures, not measured"},
      {"calibration_grid",
       "exposure prevalence step 0.01, covid19 step 0.001 up to 0.04; contact raises covid19 in "
       "both healthcare strata; population risk ratio in [1.8, 2.2]"},
      {"target_tested_exposed", "0.066"},
      {"target_tested_unexposed", "0.079"},
      {"achieved_tested_exposed", "0.0659735298865"},
      {"achieved_tested_unexposed", "0.0789803528411"},
      {"achieved_population_ratio", "1.91375809456"},
  };
  return p;
}

Network build_stress_model() { return build_exposure_model(stress_parameters()); }
Network build_contact_model() { return build_exposure_model(contact_parameters()); }

Network build_berkson_dating(const DatingTable& table) {
  NetworkDefinition def;
  def.name = "berkson-dating";
  def.variables = {{"looks", "Looks", {"attractive", "plain"}},
                   {"personality", "Personality", {"nice", "mean"}},
                   boolean("date", "Would date")};
  add_cpt(def, "looks", {}, {0.3});
  add_cpt(def, "personality", {}, {0.6});
  add_cpt(def, "date", {"looks", "personality"},
          {table.attractive_nice, table.attractive_mean, table.plain_nice, table.plain_mean});
  def.metadata = {{"parameters", "illustrative constants"}};
  return Network::create(std::move(def));
}

std::vector<std::string> fixture_names() {
  return {"simple-smoking", "simple-smoking-reversal", "realistic-smoking",
          "realistic-smoking-rr102", "stress", "contact", "berkson-dating"};
}

Network build_fixture(std::string_view name) {
  if (name == "simple-smoking") return build_simple_smoking(0.10);
  if (name == "simple-smoking-reversal") return build_simple_smoking(0.11);
  if (name == "realistic-smoking") return build_realistic_smoking(1.0);
  if (name == "realistic-smoking-rr102") return build_realistic_smoking(1.02);
  if (name == "stress") return build_stress_model();
  if (name == "contact") return build_contact_model();
  if (name == "berkson-dating") return build_berkson_dating();
  throw Error(ErrorCode::InvalidArgument, "no fixture named '" + std::string(name) + "'");
}

std::vector<GoldenExpectation> golden_table() {
  using I = std::vector<Intervention>;
  constexpr double kExact = 1e-9;
  return {
      // Simple smoking, null model.
      {"simple-smoking", {}, {}, "tested", "true", 0.0988, kExact,
       "exact: sum over the 8 joint states"},
      {"simple-smoking", {}, {}, "covid19", "true", 0.10, kExact, "exact: table entry"},
      {"simple-smoking", {{"tested", "true"}}, {}, "smoker", "true", 297.0 / 1976.0, kExact,
       "exact: 0.01485 / 0.0988 by Bayes' rule"},
      {"simple-smoking", {{"tested", "true"}}, {}, "smoker", "true", 0.15, 5e-4,
       "reported reading: only 15% of the tested are smokers"},
      {"simple-smoking", {{"tested", "true"}, {"smoker", "true"}}, {}, "covid19", "true",
       2.0 / 11.0, kExact, "exact: 2/11 by Bayes' rule"},
      {"simple-smoking", {{"tested", "true"}, {"smoker", "true"}}, {}, "covid19", "true", 0.181,
       1e-3, "reported reading: 18.1% of tested smokers"},
      {"simple-smoking", {{"tested", "true"}, {"smoker", "false"}}, {}, "covid19", "true",
       5.0 / 23.0, kExact, "exact: 5/23 by Bayes' rule"},
      {"simple-smoking", {{"tested", "true"}, {"smoker", "false"}}, {}, "covid19", "true", 0.217,
       1e-3, "reported reading: 21.7% of tested non-smokers"},

      // Simple smoking, P(covid19 | smoker) = 0.11.
      {"simple-smoking-reversal", {{"tested", "true"}, {"smoker", "true"}}, {}, "covid19", "true",
       22.0 / 111.0, kExact, "exact: 0.011 / 0.0555 by Bayes' rule"},
      {"simple-smoking-reversal", {{"tested", "true"}, {"smoker", "false"}}, {}, "covid19",
       "true", 5.0 / 23.0, kExact, "exact: non-smoker rows unchanged from the null model"},
      {"simple-smoking-reversal", {}, I{{"smoker", "true"}}, "covid19", "true", 0.11, kExact,
       "exact: table entry, smoker is a root"},
      {"simple-smoking-reversal", {}, I{{"smoker", "false"}}, "covid19", "true", 0.10, kExact,
       "exact: table entry, smoker is a root"},

      // Realistic smoking, null model.
      {"realistic-smoking", {}, {}, "smoker", "true", 0.273, kExact,
       "exact: 0.05 * 0.14 + 0.95 * 0.28"},
      {"realistic-smoking", {{"tested", "true"}, {"smoker", "true"}}, {}, "covid19", "true",
       867.0 / 5599.0, kExact, "exact: rational enumeration over the 16 joint states"},
      {"realistic-smoking", {{"tested", "true"}, {"smoker", "true"}}, {}, "covid19", "true", 0.15,
       5e-3, "reported reading: 15% of tested smokers"},
      {"realistic-smoking", {{"tested", "true"}, {"smoker", "false"}}, {}, "covid19", "true",
       23031.0 / 132457.0, kExact, "exact: rational enumeration over the 16 joint states"},
      {"realistic-smoking", {{"tested", "true"}, {"smoker", "false"}}, {}, "covid19", "true",
       0.17, 5e-3, "reported reading: 17% of tested non-smokers"},

      // Realistic smoking, relative risk 1.02.
      {"realistic-smoking-rr102", {{"tested", "true"}, {"smoker", "true"}}, {}, "covid19", "true",
       14739.0 / 93583.0, kExact, "exact: rational enumeration over the 16 joint states"},
      {"realistic-smoking-rr102", {{"tested", "true"}, {"smoker", "false"}}, {}, "covid19",
       "true", 23031.0 / 132457.0, kExact,
       "exact: rational enumeration over the 16 joint states"},
      {"realistic-smoking-rr102", {}, I{{"smoker", "true"}}, "covid19", "true", 0.01122, kExact,
       "exact: back-door sum 0.05 * 0.0306 + 0.95 * 0.0102"},
      {"realistic-smoking-rr102", {}, I{{"smoker", "false"}}, "covid19", "true", 0.011, kExact,
       "exact: back-door sum 0.05 * 0.03 + 0.95 * 0.01"},

      // Calibrated exposure models: the pinned constants' own values.
      {"stress", {{"tested", "true"}, {"stress", "true"}}, {}, "covid19", "true",
       41319.0 / 389762.0, kExact, "exact: rational enumeration of the calibrated constants"},
      {"stress", {{"tested", "true"}, {"stress", "false"}}, {}, "covid19", "true",
       204984.0 / 1289179.0, kExact, "exact: rational enumeration of the calibrated constants"},
      {"stress", {}, I{{"stress", "true"}}, "covid19", "true", 0.02035, kExact,
       "exact: back-door sum 0.05 * 0.008 + 0.95 * 0.021"},
      {"stress", {}, I{{"stress", "false"}}, "covid19", "true", 0.01435, kExact,
       "exact: back-door sum 0.05 * 0.002 + 0.95 * 0.015"},
      {"contact", {{"tested", "true"}, {"contact", "true"}}, {}, "covid19", "true",
       4905.0 / 74348.0, kExact, "exact: rational enumeration of the calibrated constants"},
      {"contact", {{"tested", "true"}, {"contact", "false"}}, {}, "covid19", "true",
       181665.0 / 2300129.0, kExact, "exact: rational enumeration of the calibrated constants"},
      {"contact", {{"contact", "true"}}, {}, "covid19", "true", 1077.0 / 94000.0, kExact,
       "exact: rational enumeration of the calibrated constants"},
      {"contact", {{"contact", "false"}}, {}, "covid19", "true", 11411.0 / 1906000.0, kExact,
       "exact: rational enumeration of the calibrated constants"},

      // Illustrative dating model.
      {"berkson-dating", {{"looks", "attractive"}, {"date", "true"}}, {}, "personality", "nice",
       27.0 / 37.0, kExact, "exact: 0.162 / 0.222 by Bayes' rule"},
      {"berkson-dating", {{"looks", "plain"}, {"date", "true"}}, {}, "personality", "nice",
       15.0 / 16.0, kExact, "exact: 0.21 / 0.224 by Bayes' rule"},
  };
}

}  // namespace colliderbn
