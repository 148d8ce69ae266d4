// Grid search for the stress and contact fixture constants.
//
// Both models share one shape: healthcare -> exposure, {healthcare, exposure}
// -> covid19, {healthcare, covid19} -> tested, with P(healthcare) and the
// tested table fixed to the realistic smoking model. The search picks the
// exposure prevalences and covid19 table that bring the tested-conditioned
// risks P(covid19 | exposure, tested) closest to the target pair, subject to
// the exposure raising covid19 risk within each healthcare stratum.
//
// Every probability is computed by summing the 16-state joint directly, so the
// tool shares nothing with the inference library it is used to test.

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include <CLI11.hpp>

namespace {

constexpr double kHealthcare = 0.05;
// P(tested | healthcare, covid19), indexed [healthcare][covid19], 1 = true.
constexpr double kTested[2][2] = {{0.01, 0.15}, {0.10, 0.99}};

struct Parameters {
  double exposure_given_healthcare = 0;
  double exposure_given_public = 0;
  // covid[healthcare][exposure], 1 = true
  double covid[2][2] = {{0, 0}, {0, 0}};
};

struct Endpoints {
  double tested_exposed = 0;     // P(c | e, t)
  double tested_unexposed = 0;   // P(c | !e, t)
  double population_exposed = 0;    // P(c | e)
  double population_unexposed = 0;  // P(c | !e)
};

Endpoints enumerate(const Parameters& p) {
  // mass[e][c][t]
  double mass[2][2][2] = {};
  for (int h = 0; h < 2; ++h) {
    const double ph = h ? kHealthcare : 1 - kHealthcare;
    const double pe1 = h ? p.exposure_given_healthcare : p.exposure_given_public;
    for (int e = 0; e < 2; ++e) {
      const double pe = e ? pe1 : 1 - pe1;
      for (int c = 0; c < 2; ++c) {
        const double pc = c ? p.covid[h][e] : 1 - p.covid[h][e];
        for (int t = 0; t < 2; ++t) {
          const double pt = t ? kTested[h][c] : 1 - kTested[h][c];
          mass[e][c][t] += ph * pe * pc * pt;
        }
      }
    }
  }
  auto tested = [&](int e) { return mass[e][1][1] / (mass[e][1][1] + mass[e][0][1]); };
  auto population = [&](int e) {
    const double c1 = mass[e][1][0] + mass[e][1][1];
    const double c0 = mass[e][0][0] + mass[e][0][1];
    return c1 / (c1 + c0);
  };
  return {tested(1), tested(0), population(1), population(0)};
}

struct Search {
  double target_exposed;
  double target_unexposed;
  double prevalence_step;
  double covid_step;
  double covid_max;
  // Population risk-ratio window; disabled when min > max.
  double ratio_min = 1;
  double ratio_max = 0;
};

struct Best {
  double error = std::numeric_limits<double>::infinity();
  Parameters parameters;
  Endpoints endpoints;
};

std::vector<double> grid(double step, double max) {
  std::vector<double> out;
  const int n = static_cast<int>(std::lround(max / step));
  for (int i = 1; i <= n; ++i) out.push_back(std::round(i * step * 1e6) / 1e6);
  return out;
}

Best run(const Search& s) {
  const auto prevalence = grid(s.prevalence_step, 1.0 - s.prevalence_step);
  const auto covid = grid(s.covid_step, s.covid_max);
  const bool ratio_window = s.ratio_min <= s.ratio_max;
  Best best;
  Parameters p;
  for (double a : prevalence) {
    for (double b : prevalence) {
      if (b >= a) continue;  // exposure more common among healthcare workers
      p.exposure_given_healthcare = a;
      p.exposure_given_public = b;
      for (double ch0 : covid) {
        for (double cn0 : covid) {
          for (double ch1 : covid) {
            if (ch1 <= ch0) continue;
            for (double cn1 : covid) {
              if (cn1 <= cn0) continue;
              p.covid[1][0] = ch0;
              p.covid[0][0] = cn0;
              p.covid[1][1] = ch1;
              p.covid[0][1] = cn1;
              const Endpoints e = enumerate(p);
              if (ratio_window) {
                const double ratio = e.population_exposed / e.population_unexposed;
                if (ratio < s.ratio_min || ratio > s.ratio_max) continue;
              }
              const double d1 = e.tested_exposed - s.target_exposed;
              const double d0 = e.tested_unexposed - s.target_unexposed;
              const double error = d1 * d1 + d0 * d0;
              if (error < best.error) best = {error, p, e};
            }
          }
        }
      }
    }
  }
  return best;
}

void print(const char* name, const Best& b) {
  const auto& p = b.parameters;
  std::printf("%s\n", name);
  std::printf("  exposure | healthcare      %.4g\n", p.exposure_given_healthcare);
  std::printf("  exposure | public          %.4g\n", p.exposure_given_public);
  std::printf("  covid19 | healthcare, exposed    %.4g\n", p.covid[1][1]);
  std::printf("  covid19 | healthcare, unexposed  %.4g\n", p.covid[1][0]);
  std::printf("  covid19 | public, exposed        %.4g\n", p.covid[0][1]);
  std::printf("  covid19 | public, unexposed      %.4g\n", p.covid[0][0]);
  std::printf("  achieved P(c|e,t)=%.6f  P(c|!e,t)=%.6f  P(c|e)=%.6f  P(c|!e)=%.6f  ratio=%.4f\n",
              b.endpoints.tested_exposed, b.endpoints.tested_unexposed,
              b.endpoints.population_exposed, b.endpoints.population_unexposed,
              b.endpoints.population_exposed / b.endpoints.population_unexposed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid search for the stress and contact fixture constants"};
  // The pinned fixture constants come from these defaults (about two minutes).
  double prevalence_step = 0.01;
  double covid_step = 0.001;
  double covid_max = 0.04;
  app.add_option("--prevalence-step", prevalence_step, "grid step for exposure prevalences");
  app.add_option("--covid-step", covid_step, "grid step for covid19 probabilities");
  app.add_option("--covid-max", covid_max, "largest covid19 probability searched");
  CLI11_PARSE(app, argc, argv);

  print("stress", run({0.106, 0.159, prevalence_step, covid_step, covid_max}));
  print("contact", run({0.066, 0.079, prevalence_step, covid_step, covid_max, 1.8, 2.2}));
  return 0;
}
