#pragma once

#include <string>
#include <vector>

namespace cns {

struct BbmoEntry {
  int j0;
  double value;
  double tail;
};

struct BlimEntry {
  int m;
  double t;
  double c;
};

struct NinftyEntry {
  double t;
  double bound;
  double grid_value;
};

/// Structured record of the verification run. Serialization uses a fixed
/// field order and fixed 17-significant-digit floats so identical configs
/// produce byte-identical files.
struct NormReport {
  int n = 0;
  double a = 0.0;
  double b = 0.0;

  std::vector<BbmoEntry> bbmo;
  std::vector<BlimEntry> blim;
  double blowup_slope = 0.0;
  double blowup_expected = 0.0;
  std::vector<NinftyEntry> ninfty;
  double divergence_residual = 0.0;

  bool claim_bbmo = false;
  bool claim_blim_fails = false;
  bool claim_ninfty = false;
  bool claim_divfree = false;

  bool all_pass() const {
    return claim_bbmo && claim_blim_fails && claim_ninfty && claim_divfree;
  }

  std::string to_json() const;
  std::string blim_csv() const;  // columns t,c
  std::string bbmo_csv() const;  // columns j0,S
};

/// %.17g rendering used in JSON reports.
std::string format_sig17(double v);

/// Shortest round-trip rendering used in CSV output.
std::string format_shortest(double v);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace cns
