#include "coop/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace coop {

const char* const kTrajectoryHeader = "t,u,v";
const char* const kSweepHeader =
    "param,existence,s_minus,s_plus,u_plus,v_plus,tr_plus,det_plus,verdict_plus,verdict_minus,attractor,period,"
    "v_min,v_max";

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

namespace {

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

template <class E>
std::string opt_name(const std::optional<E>& x) {
  return x ? std::string(to_string(*x)) : std::string();
}

}  // namespace

std::string trajectory_csv(const Trajectory& tr) {
  std::string out = kTrajectoryHeader;
  out += '\n';
  out.reserve(tr.times.size() * 64);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    out += format_double(tr.times[i]);
    out += ',';
    out += format_double(tr.states[i].u);
    out += ',';
    out += format_double(tr.states[i].v);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const SweepRow& r : rows) {
    std::optional<double> period, v_min, v_max;
    std::string attractor;
    if (r.attractor) {
      attractor = r.attractor->label();
      if (r.attractor->cycle) {
        period = r.attractor->cycle->period;
        v_min = r.attractor->cycle->v_min;
        v_max = r.attractor->cycle->v_max;
      } else if (r.attractor->equilibrium) {
        v_min = v_max = r.attractor->final_state.v;
      }
    } else if (!r.error.empty()) {
      attractor = "error";
    }
    const std::vector<std::string> fields = {
        format_double(r.param),
        r.error.empty() || r.verdict_plus || r.s_plus ? std::string(to_string(r.existence)) : std::string(),
        opt(r.s_minus),
        opt(r.s_plus),
        r.plus ? format_double(r.plus->u) : std::string(),
        r.plus ? format_double(r.plus->v) : std::string(),
        opt(r.tr_plus),
        opt(r.det_plus),
        opt_name(r.verdict_plus),
        opt_name(r.verdict_minus),
        attractor,
        opt(period),
        opt(v_min),
        opt(v_max),
    };
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace coop
