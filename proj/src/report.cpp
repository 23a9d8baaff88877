#include "cns/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cns/errors.hpp"

namespace cns {

std::string format_sig17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

const char* verdict(bool pass) { return pass ? "pass" : "fail"; }

}  // namespace

std::string NormReport::to_json() const {
  std::ostringstream out;
  out << "{\"params\": {\"n\": " << n << ", \"a\": " << format_sig17(a)
      << ", \"b\": " << format_sig17(b) << "}, \"bbmo\": [";
  for (std::size_t i = 0; i < bbmo.size(); ++i) {
    if (i) out << ", ";
    out << "{\"j0\": " << bbmo[i].j0
        << ", \"value\": " << format_sig17(bbmo[i].value)
        << ", \"tail\": " << format_sig17(bbmo[i].tail) << "}";
  }
  out << "], \"blim\": [";
  for (std::size_t i = 0; i < blim.size(); ++i) {
    if (i) out << ", ";
    out << "{\"m\": " << blim[i].m << ", \"t\": " << format_sig17(blim[i].t)
        << ", \"c\": " << format_sig17(blim[i].c) << "}";
  }
  out << "], \"blowup\": {\"slope\": " << format_sig17(blowup_slope)
      << ", \"expected\": " << format_sig17(blowup_expected)
      << "}, \"ninfty\": [";
  for (std::size_t i = 0; i < ninfty.size(); ++i) {
    if (i) out << ", ";
    out << "{\"t\": " << format_sig17(ninfty[i].t)
        << ", \"bound\": " << format_sig17(ninfty[i].bound)
        << ", \"grid_value\": " << format_sig17(ninfty[i].grid_value) << "}";
  }
  out << "], \"divergence_residual\": " << format_sig17(divergence_residual)
      << ", \"claims\": {\"B.BMO\": \"" << verdict(claim_bbmo)
      << "\", \"B.lim-fails\": \"" << verdict(claim_blim_fails)
      << "\", \"N-infty\": \"" << verdict(claim_ninfty)
      << "\", \"div-free\": \"" << verdict(claim_divfree) << "\"}}\n";
  return out.str();
}

std::string NormReport::blim_csv() const {
  std::ostringstream out;
  out << "t,c\n";
  for (const auto& entry : blim) {
    out << format_shortest(entry.t) << "," << format_shortest(entry.c)
        << "\n";
  }
  return out.str();
}

std::string NormReport::bbmo_csv() const {
  std::ostringstream out;
  out << "j0,S\n";
  for (const auto& entry : bbmo) {
    out << entry.j0 << "," << format_shortest(entry.value) << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace cns
