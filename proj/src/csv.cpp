#include "lyapqc/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lyapqc {

namespace {

void put(std::ostream& os, double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  os.write(buf, p - buf);
}

SegmentKind parse_kind(const std::string& s, int line) {
  if (s == "Control") return SegmentKind::Control;
  if (s == "Free") return SegmentKind::Free;
  if (s == "Kick") return SegmentKind::Kick;
  throw ConfigError("trajectory csv line " + std::to_string(line) + ": unknown segment kind '" +
                    s + "'");
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << kTrajectoryHeader << '\n';
  for (const Sample& s : tr.samples) {
    const double vals[] = {s.t,
                           s.state.a().real(),
                           s.state.a().imag(),
                           s.state.b().real(),
                           s.state.b().imag(),
                           s.v,
                           s.dvdt,
                           s.f};
    for (double v : vals) {
      put(os, v);
      os << ',';
    }
    os << to_string(s.kind) << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr) {
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  write_file_atomic(path, os.str());
}

std::vector<Sample> read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTrajectoryHeader) {
    throw ConfigError("trajectory csv: missing or wrong header");
  }
  std::vector<Sample> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) {
      throw ConfigError("trajectory csv line " + std::to_string(line_no) + ": expected 9 columns");
    }
    double v[8];
    for (int k = 0; k < 8; ++k) {
      const auto& c = cells[static_cast<std::size_t>(k)];
      const auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v[k]);
      if (ec != std::errc() || p != c.data() + c.size()) {
        throw ConfigError("trajectory csv line " + std::to_string(line_no) + ": bad number '" +
                          c + "'");
      }
    }
    Sample s{v[0], State({v[1], v[2]}, {v[3], v[4]}), v[5], v[6], v[7], parse_kind(cells[8], line_no)};
    out.push_back(s);
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const SweepResult& res) {
  const auto& g = res.grid;
  switch (res.axis) {
    case SweepAxis::GammaPhi: os << "gamma,phi"; break;
    case SweepAxis::Gamma: os << "gamma"; break;
    case SweepAxis::Strength: os << "s"; break;
  }
  for (const auto& [name, _] : res.tables) os << ',' << name;
  os << '\n';

  auto row_values = [&](Eigen::Index i, Eigen::Index j) {
    for (const auto& [_, m] : res.tables) {
      os << ',';
      put(os, m(i, j));
    }
    os << '\n';
  };

  if (res.axis == SweepAxis::GammaPhi) {
    for (std::size_t i = 0; i < g.gamma_axis.size(); ++i) {
      for (std::size_t j = 0; j < g.phi_axis.size(); ++j) {
        put(os, g.gamma_axis[i]);
        os << ',';
        put(os, g.phi_axis[j]);
        row_values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
    return;
  }
  const auto& axis = res.axis == SweepAxis::Gamma ? g.gamma_axis : g.s_values;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    put(os, axis[i]);
    row_values(static_cast<Eigen::Index>(i), 0);
  }
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& res) {
  std::ostringstream os;
  write_sweep_csv(os, res);
  write_file_atomic(path, os.str());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace lyapqc
