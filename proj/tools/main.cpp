#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cns/blowup.hpp"
#include "cns/dyadic.hpp"
#include "cns/errors.hpp"
#include "cns/grid.hpp"
#include "cns/meyer.hpp"
#include "cns/report.hpp"

namespace {

using namespace cns;

struct Options {
  int n = 2;
  double a = 0.25;
  double b = 0.75;
  int j0_max = 10;
  int m_max = 40;
  std::string m_range = "4..16";
  int grid = 256;
  double box = 1.0;
  double t = 1.0 / 16.0;
  double gamma = -1.0;
  std::string q = "2";
  std::string out;
  std::string format = "json";
  unsigned seed = 7;
  int transition_order = 4;
};

std::pair<int, int> parse_range(const std::string& text) {
  const auto pos = text.find("..");
  if (pos == std::string::npos) {
    throw ParamError("range must look like LO..HI, got '" + text + "'");
  }
  return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 2))};
}

double parse_q(const std::string& text) {
  if (text == "inf" || text == "INF" || text == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  return std::stod(text);
}

std::string sibling_path(const std::string& base, const std::string& suffix,
                         const std::string& ext) {
  std::filesystem::path p(base);
  std::filesystem::path stem = p.parent_path() / p.stem();
  return stem.string() + suffix + ext;
}

int cmd_meyer_check(const Options& opt) {
  const meyer::MeyerProfile profile(opt.transition_order);

  // Spectral partition identities on the transition band.
  double partition = 0.0, reflection = 0.0;
  const int samples = 10000;
  for (int s = 0; s <= samples; ++s) {
    const double xi =
        2.0 * meyer::kPi / 3.0 * (1.0 + static_cast<double>(s) / samples);
    const double w = profile.omega(xi);
    const double w2 = profile.omega(2.0 * xi);
    const double wr = profile.omega(2.0 * meyer::kPi - xi);
    partition = std::max(partition, std::abs(w * w + w2 * w2 - 1.0));
    reflection = std::max(reflection, std::abs(w * w + wr * wr - 1.0));
  }

  // Scale completeness at sampled frequencies.
  std::mt19937 rng(opt.seed);
  std::uniform_real_distribution<double> log_xi(std::log(0.1), std::log(100.0));
  std::bernoulli_distribution sign;
  double completeness = 0.0;
  for (int s = 0; s < 50; ++s) {
    double xi = std::exp(log_xi(rng));
    if (sign(rng)) xi = -xi;
    double sum = 0.0;
    const int j_hi = static_cast<int>(
        std::ceil(std::log2(3.0 * std::abs(xi) / (2.0 * meyer::kPi)))) + 2;
    const int j_lo = j_hi - 8;
    for (int j = j_lo; j <= j_hi; ++j) {
      const double w = profile.omega(std::ldexp(std::abs(xi), -j));
      sum += w * w;
    }
    completeness = std::max(completeness, std::abs(sum - 1.0));
  }

  // Orthonormality over sampled index pairs, by frequency quadrature.
  double ortho = 0.0;
  std::uniform_int_distribution<int> scale(-2, 3);
  std::uniform_int_distribution<long long> shift(-8, 8);
  for (int n_dim = 1; n_dim <= 2; ++n_dim) {
    std::uniform_int_distribution<int> mask(1, (1 << n_dim) - 1);
    for (int s = 0; s < 12; ++s) {
      auto draw = [&]() {
        WaveletIndex idx;
        const int bits = mask(rng);
        for (int i = 0; i < n_dim; ++i) {
          idx.eps.push_back((bits >> i) & 1);
          idx.k.push_back(shift(rng));
        }
        idx.j = scale(rng);
        return idx;
      };
      const WaveletIndex first = draw();
      const WaveletIndex second = s % 3 == 0 ? first : draw();
      const double expected = first == second ? 1.0 : 0.0;
      const double inner = meyer::inner_product_freq(profile, first, second);
      ortho = std::max(ortho, std::abs(inner - expected));
    }
  }

  // Periodization: truncated direct sum against the trigonometric
  // polynomial.
  const double periodization = meyer::periodization_residual(profile, 400, 33);

  const bool pass = partition <= 1e-12 && reflection <= 1e-12 &&
                    completeness <= 1e-10 && ortho <= 1e-6 &&
                    periodization <= 1e-8;

  std::ostringstream json;
  json << "{\"transition_order\": " << opt.transition_order
       << ", \"partition_residual\": " << format_sig17(partition)
       << ", \"reflection_residual\": " << format_sig17(reflection)
       << ", \"completeness_residual\": " << format_sig17(completeness)
       << ", \"orthonormality_residual\": " << format_sig17(ortho)
       << ", \"periodization_residual\": " << format_sig17(periodization)
       << ", \"pass\": " << (pass ? "true" : "false") << "}\n";

  const std::string out = opt.out.empty() ? "meyer_check.json" : opt.out;
  write_text_file(out, json.str());
  std::cout << json.str();
  if (!pass) {
    throw NumericalFailure("profile identity residual above tolerance");
  }
  return 0;
}

int cmd_verify(const Options& opt) {
  const blowup::BlowupParams params =
      blowup::validate_params(opt.n, opt.a, opt.b);
  const meyer::MeyerProfile profile(opt.transition_order);

  blowup::VerifyConfig config;
  config.j0_max = opt.j0_max;
  config.m_max = opt.m_max;
  std::tie(config.m_range_lo, config.m_range_hi) = parse_range(opt.m_range);
  config.grid_points = opt.grid;
  config.box_side = opt.box;

  const NormReport report = blowup::run_verification(params, profile, config);

  const std::string out = opt.out.empty() ? "report.json" : opt.out;
  write_text_file(out, report.to_json());
  write_text_file(sibling_path(out, "_blim", ".csv"), report.blim_csv());
  write_text_file(sibling_path(out, "_bbmo", ".csv"), report.bbmo_csv());

  std::cout << "B.BMO        " << (report.claim_bbmo ? "pass" : "fail")
            << "\nB.lim-fails  " << (report.claim_blim_fails ? "pass" : "fail")
            << "\nN-infty      " << (report.claim_ninfty ? "pass" : "fail")
            << "\ndiv-free     " << (report.claim_divfree ? "pass" : "fail")
            << "\nreport: " << out << "\n";
  if (!report.all_pass()) {
    throw NumericalFailure("one or more verification claims failed");
  }
  return 0;
}

int cmd_norm(const Options& opt, const std::string& table_path) {
  const dyadic::CoefficientField field =
      dyadic::read_coefficient_table(table_path);
  if (field.entries.empty()) {
    std::cerr << "warning: empty coefficient table\n";
    std::cout << 0.0 << "\n";
    return 0;
  }
  dyadic::SpaceParams space{opt.gamma, parse_q(opt.q)};
  const auto roots = dyadic::root_candidates(field);
  const auto breakdown = dyadic::tl_norm_breakdown(field, space, roots);
  double norm = 0.0;
  for (const auto& [cube, value] : breakdown) norm = std::max(norm, value);
  std::cout << format_shortest(norm) << "\n";

  if (!opt.out.empty()) {
    std::ostringstream body;
    if (opt.format == "csv") {
      body << "j0,k0,value\n";
      for (const auto& [cube, value] : breakdown) {
        body << cube.j << ",\"";
        for (std::size_t i = 0; i < cube.k.size(); ++i) {
          body << (i ? " " : "") << cube.k[i];
        }
        body << "\"," << format_shortest(value) << "\n";
      }
    } else {
      body << "{\"norm\": " << format_sig17(norm) << ", \"roots\": [";
      for (std::size_t i = 0; i < breakdown.size(); ++i) {
        if (i) body << ", ";
        body << "{\"j0\": " << breakdown[i].first.j << ", \"k0\": [";
        for (std::size_t c = 0; c < breakdown[i].first.k.size(); ++c) {
          if (c) body << ", ";
          body << breakdown[i].first.k[c];
        }
        body << "], \"value\": " << format_sig17(breakdown[i].second) << "}";
      }
      body << "]}\n";
    }
    write_text_file(opt.out, body.str());
  }
  return 0;
}

int cmd_synth(const Options& opt) {
  if (!(opt.t > 0.0)) throw ParamError("synth requires t > 0");
  const blowup::BlowupParams params =
      blowup::validate_params(opt.n, opt.a, opt.b);
  const meyer::MeyerProfile profile(opt.transition_order);
  GridSpec grid{params.n, opt.box, opt.grid};
  grid.validate();

  const SampledField u1 = blowup::synthesize_u1(params, profile, opt.t, grid);
  const SampledField u2 = blowup::build_u2(params, profile, opt.t, grid);

  std::vector<SampledField> components;
  components.push_back(u1);
  components.push_back(u2);
  for (int c = 2; c < params.n; ++c) {
    SampledField zero;
    zero.grid = grid;
    zero.values.assign(grid.total_points(), 0.0);
    components.push_back(std::move(zero));
  }
  const double residual = blowup::divergence_residual(components);
  double sup = 0.0;
  for (const auto& c : components) sup = std::max(sup, c.max_abs());

  const std::string out = opt.out.empty() ? "field.csv" : opt.out;
  std::ostringstream csv;
  for (int i = 0; i < params.n; ++i) csv << "x" << (i + 1) << ",";
  for (int i = 0; i < params.n; ++i) {
    csv << "u" << (i + 1) << (i + 1 == params.n ? "\n" : ",");
  }
  const int N = grid.points_per_side;
  std::vector<int> p(params.n, 0);
  for (std::size_t flat = 0; flat < grid.total_points(); ++flat) {
    std::size_t rem = flat;
    for (int i = params.n - 1; i >= 0; --i) {
      p[i] = static_cast<int>(rem % N);
      rem /= N;
    }
    for (int i = 0; i < params.n; ++i) {
      csv << format_shortest(grid.box_side * p[i] / N) << ",";
    }
    for (int i = 0; i < params.n; ++i) {
      csv << format_shortest(components[i].values[flat])
          << (i + 1 == params.n ? "\n" : ",");
    }
  }
  write_text_file(out, csv.str());

  std::ostringstream meta;
  meta << "{\"t\": " << format_sig17(opt.t)
       << ", \"sup_norm\": " << format_sig17(sup)
       << ", \"divergence_residual\": " << format_sig17(residual) << "}\n";
  write_text_file(sibling_path(out, "", ".json"), meta.str());
  std::cout << "field: " << out << " sup_norm: " << format_shortest(sup)
            << " divergence_residual: " << format_shortest(residual) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Tensor Meyer wavelets, dyadic Carleson / Triebel-Lizorkin "
      "functionals, and an explicit divergence-free field with bounded "
      "Carleson quantity and inflating fixed-time norm"};
  app.require_subcommand(1);

  Options opt;
  std::string table_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--n", opt.n, "space dimension");
    cmd->add_option("--a", opt.a, "time exponent parameter");
    cmd->add_option("--b", opt.b, "scale decay parameter");
    cmd->add_option("--j0-max", opt.j0_max, "coarsest-to-finest root range");
    cmd->add_option("--m-max", opt.m_max, "dyadic band cap");
    cmd->add_option("--m-range", opt.m_range, "certificate window LO..HI");
    cmd->add_option("--grid", opt.grid, "points per side (power of two)");
    cmd->add_option("--box", opt.box, "box side length");
    cmd->add_option("--t", opt.t, "time slice");
    cmd->add_option("--gamma", opt.gamma, "regularity index");
    cmd->add_option("--q", opt.q, "integrability index (number or inf)");
    cmd->add_option("--out", opt.out, "output path");
    cmd->add_option("--format", opt.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", opt.seed, "seed for sampled spot checks");
    cmd->add_option("--transition-order", opt.transition_order,
                    "profile transition smoothness order");
  };

  CLI::App* meyer_check =
      app.add_subcommand("meyer-check", "run the profile invariant battery");
  add_common(meyer_check);
  CLI::App* verify = app.add_subcommand(
      "verify", "reproduce the full verification pipeline and report");
  add_common(verify);
  CLI::App* norm = app.add_subcommand(
      "norm", "endpoint Triebel-Lizorkin norm of a coefficient table");
  norm->add_option("table", table_path, "coefficient table JSON")->required();
  add_common(norm);
  CLI::App* synth =
      app.add_subcommand("synth", "sample the field at a time slice to CSV");
  add_common(synth);

  CLI11_PARSE(app, argc, argv);

  try {
    if (meyer_check->parsed()) return cmd_meyer_check(opt);
    if (verify->parsed()) return cmd_verify(opt);
    if (norm->parsed()) return cmd_norm(opt, table_path);
    if (synth->parsed()) return cmd_synth(opt);
  } catch (const ParamError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const NyquistError& e) {
    std::cerr << "resolution error: " << e.what() << "\n";
    return 3;
  } catch (const QuadratureDivergence& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 3;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
