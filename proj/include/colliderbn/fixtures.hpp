#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "colliderbn/causal.hpp"
#include "colliderbn/network.hpp"

namespace colliderbn {

// All fixtures use Boolean variables with states ["true", "false"].

/// smoker -> tested <- covid19, plus smoker -> covid19 unless the argument
/// equals the 0.10 baseline (the null model has no such edge).
/// Throws Error(InvalidArgument) outside [0, 1].
Network build_simple_smoking(double p_covid_given_smoker);

/// healthcare -> {smoker, covid19, tested}, covid19 -> tested, plus
/// smoker -> covid19 unless relative_risk is 1. Smokers' covid19 risk is the
/// stratum baseline (0.03 healthcare, 0.01 public) times relative_risk.
/// Throws Error(InvalidArgument) for negative risk or a probability above 1.
Network build_realistic_smoking(double relative_risk);

/// healthcare -> exposure, {healthcare, exposure} -> covid19,
/// {healthcare, covid19} -> tested, with the realistic smoking model's
/// healthcare prior and testing table.
struct ExposureModelParameters {
  std::string name;
  std::string exposure;
  std::string exposure_label;
  double exposure_given_healthcare = 0.0;
  double exposure_given_public = 0.0;
  double covid_healthcare_exposed = 0.0;
  double covid_healthcare_unexposed = 0.0;
  double covid_public_exposed = 0.0;
  double covid_public_unexposed = 0.0;
  std::vector<std::pair<std::string, std::string>> metadata;
};

Network build_exposure_model(const ExposureModelParameters& parameters);

/// Pinned by tools/calibrate_fixtures against tested-conditioned covid19
/// risks of 0.106 (stressed) and 0.159 (not stressed).
ExposureModelParameters stress_parameters();
/// Pinned against 0.066 (contact) and 0.079 (no contact) with the
/// population risk ratio held in [1.8, 2.2].
ExposureModelParameters contact_parameters();

Network build_stress_model();
Network build_contact_model();

/// P(date = true | looks, personality), looks in {attractive, plain} and
/// personality in {nice, mean}.
struct DatingTable {
  double attractive_nice = 0.9;
  double plain_nice = 0.5;
  double attractive_mean = 0.5;
  double plain_mean = 0.05;
};

/// looks -> date <- personality with P(attractive) = 0.3, P(nice) = 0.6.
Network build_berkson_dating(const DatingTable& table = {});

/// Names of the shipped models/ files, without extension.
std::vector<std::string> fixture_names();
/// Throws Error(InvalidArgument) for an unknown name.
Network build_fixture(std::string_view name);

struct GoldenExpectation {
  std::string fixture;
  Evidence evidence;
  std::vector<Intervention> interventions;
  std::string target;
  std::string state;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string provenance;
};

std::vector<GoldenExpectation> golden_table();

}  // namespace colliderbn
