#include "hrm/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hrm/diagnostics.hpp"
#include "hrm/entropy.hpp"

namespace hrm {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string checksum_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("checksum_file: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(ss.str())));
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("write_file_atomic: cannot open '" + tmp + "' for writing");
    out << content;
    if (!out) throw Error("write_file_atomic: short write to '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string fields_csv(const SolutionField& field, const EosModel& eos) {
  if (field.n_comp() != 3) throw UsageError("fields_csv: expected a 3-component field");
  std::ostringstream out;
  out << "x,rho_m,m,Gamma,p,u,alpha\n";
  for (int k = 0; k < field.n_times(); ++k) {
    out << "# t=" << format_g17(field.times[k]) << "\n";
    const auto& S = field.states[k];
    for (int i = 0; i < field.grid.n_cells; ++i) {
      const ConservedState U{S(i, 0), S(i, 1), S(i, 2)};
      const PrimitiveState V = prim_from_cons(U, eos);
      out << format_g17(field.grid.center(i)) << "," << format_g17(U.rho_m) << ","
          << format_g17(U.m) << "," << format_g17(U.Gamma) << "," << format_g17(V.p) << ","
          << format_g17(V.u) << "," << format_g17(V.alpha) << "\n";
    }
  }
  return out.str();
}

std::string series_csv(const SolutionField& field, const EosModel& eos) {
  if (field.n_comp() != 3) throw UsageError("series_csv: expected a 3-component field");
  const double dx = field.grid.dx();
  const Eigen::ArrayXd S = total_entropy_series(field, eos);
  const auto res = relaxation_residual_field(field, eos);
  const GradientNormSeries gn = gradient_norm_series(field, eos);
  const PrimFields pf = primitive_fields(field, eos);

  auto l2 = [&](const Eigen::ArrayXd& f) { return std::sqrt((f * f).sum() * dx); };

  std::ostringstream out;
  out << "t,total_entropy,l2_alpha_res,l2_dxp,l2_dxu,l2_p,l2_u\n";
  for (int k = 0; k < field.n_times(); ++k) {
    out << format_g17(field.times[k]) << "," << format_g17(S[k]) << "," << format_g17(l2(res[k]))
        << "," << format_g17(gn.dxp[k]) << "," << format_g17(gn.dxu[k]) << ","
        << format_g17(l2(pf.p[k])) << "," << format_g17(l2(pf.u[k])) << "\n";
  }
  return out.str();
}

void Report::set(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}
void Report::set(const std::string& key, const char* value) { entries_.emplace_back(key, value); }
void Report::set(const std::string& key, double value) { entries_.emplace_back(key, format_g17(value)); }
void Report::set(const std::string& key, bool value) { entries_.emplace_back(key, value ? "true" : "false"); }

std::string Report::text() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
  return out.str();
}

std::string Manifest::text() const {
  std::ostringstream out;
  out << "manifest.version = " << kVersion << "\n";
  out << "manifest.status = " << status << "\n";
  if (!error.empty()) out << "manifest.error = " << error << "\n";
  out << "manifest.wall_start = " << format_g17(wall_start) << "\n";
  out << "manifest.wall_end = " << format_g17(wall_end) << "\n";
  for (const auto& [name, sum] : file_checksums)
    out << "manifest.checksum." << name << " = " << sum << "\n";
  for (const auto& [k, v] : verdicts) out << "manifest.verdict." << k << " = " << v << "\n";
  std::istringstream cfg(canonical_config(config));
  std::string line;
  while (std::getline(cfg, line)) out << "config." << line << "\n";
  return out.str();
}

void write_manifest(const std::string& path, const Manifest& m) {
  write_file_atomic(path, m.text());
}

}  // namespace hrm
