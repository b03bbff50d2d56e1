#include "morse_causal/io.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace morse {

std::string certificate_json(const BarrierCertificate& cert, int indent) {
  using nlohmann::json;
  json j;
  j["params"] = json::object();
  for (const auto& [k, v] : cert.params) j["params"][k] = v;
  j["checks"] = json::object();
  for (const auto& [k, v] : cert.checks) j["checks"][k] = v;
  j["pieces"] = json::array();
  for (const auto& piece : cert.pieces) {
    json p;
    p["name"] = piece.name;
    p["min_residual"] = piece.min_residual;
    json samples = json::array();
    for (std::size_t i = 0; i < piece.curve.samples.size(); ++i) {
      const CurveSample& s = piece.curve.samples[i];
      json row;
      row["t"] = s.t;
      row["x1"] = s.p[0];
      row["x2"] = s.p[1];
      if (s.tangent[0] != 0.0)
        row["v"] = s.tangent[1] / s.tangent[0];
      else
        row["v"] = nullptr;
      row["residual"] = piece.residuals[i];
      samples.push_back(std::move(row));
    }
    p["samples"] = std::move(samples);
    j["pieces"].push_back(std::move(p));
  }
  j["min_margin"] = cert.min_margin;
  j["argmin"] = {{"piece", cert.argmin_piece}, {"t", cert.argmin_t}};
  j["sign"] = to_string(cert.sign);
  j["verdict"] = to_string(cert.verdict);
  return j.dump(indent) + "\n";
}

namespace {

std::ostringstream csv_stream() {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  return os;
}

}  // namespace

std::string trace_csv(const BoundaryTrace& trace) {
  auto os = csv_stream();
  os << "component,s,x1,x2,residual\n";
  for (const auto& s : trace.samples)
    os << to_string(trace.component) << ',' << s.s << ',' << s.p[0] << ','
       << s.p[1] << ',' << s.residual << '\n';
  return os.str();
}

std::string grid_csv(const ReachGrid& grid) {
  auto os = csv_stream();
  os << "x1,x2,label\n";
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const PlanePoint c = grid.center(i, j);
      os << c[0] << ',' << c[1] << ','
         << (grid.reached(i, j) ? "Reached" : "Unreached") << '\n';
    }
  return os.str();
}

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, sizeof v);
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

struct Reader {
  const std::vector<std::uint8_t>& b;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > b.size()) throw Error(ErrorKind::Parse, "RLE stream truncated");
  }
  std::uint64_t uint(int bytes) {
    need(bytes);
    std::uint64_t v = 0;
    for (int k = 0; k < bytes; ++k) v |= static_cast<std::uint64_t>(b[pos + k]) << (8 * k);
    pos += bytes;
    return v;
  }
  double f64() {
    const std::uint64_t v = uint(8);
    double d;
    std::memcpy(&d, &v, sizeof d);
    return d;
  }
};

}  // namespace

std::vector<std::uint8_t> encode_rle(const ReachGrid& grid) {
  std::vector<std::uint8_t> out{'M', 'R', 'C', 'H'};
  put_u16(out, kRleVersion);
  put_u16(out, static_cast<std::uint16_t>(grid.nx));
  put_u16(out, static_cast<std::uint16_t>(grid.ny));
  out.insert(out.end(), 6, 0);
  put_f64(out, grid.domain.xmin);
  put_f64(out, grid.domain.xmax);
  put_f64(out, grid.domain.ymin);
  put_f64(out, grid.domain.ymax);
  std::vector<std::uint32_t> runs;
  std::uint8_t cur = 0;
  std::uint32_t len = 0;
  for (std::uint8_t l : grid.labels) {
    if (l != cur) {
      runs.push_back(len);
      cur = l;
      len = 0;
    }
    ++len;
  }
  runs.push_back(len);
  put_u32(out, static_cast<std::uint32_t>(runs.size()));
  for (std::uint32_t r : runs) put_u32(out, r);
  return out;
}

ReachGrid decode_rle(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "MRCH", 4) != 0)
    throw Error(ErrorKind::Parse, "not an MRCH stream");
  Reader r{bytes, 4};
  if (r.uint(2) != kRleVersion) throw Error(ErrorKind::Parse, "unsupported RLE version");
  ReachGrid g;
  g.nx = static_cast<int>(r.uint(2));
  g.ny = static_cast<int>(r.uint(2));
  r.pos = 16;
  g.domain.xmin = r.f64();
  g.domain.xmax = r.f64();
  g.domain.ymin = r.f64();
  g.domain.ymax = r.f64();
  const std::uint64_t nruns = r.uint(4);
  const std::size_t cells = static_cast<std::size_t>(g.nx) * g.ny;
  g.labels.reserve(cells);
  std::uint8_t cur = 0;
  for (std::uint64_t k = 0; k < nruns; ++k) {
    const std::uint64_t len = r.uint(4);
    if (g.labels.size() + len > cells) throw Error(ErrorKind::Parse, "RLE runs overflow grid");
    g.labels.insert(g.labels.end(), len, cur);
    cur ^= 1;
  }
  if (g.labels.size() != cells) throw Error(ErrorKind::Parse, "RLE runs do not cover grid");
  return g;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  f << data;
  if (!f) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& data) {
  write_file(path, std::string(data.begin(), data.end()));
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Parse, "config line " + std::to_string(lineno) + ": missing '='");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && (val.front() == '"' || val.front() == '\'') && val.back() == val.front())
      val = val.substr(1, val.size() - 2);
    if (key.empty())
      throw Error(ErrorKind::Parse, "config line " + std::to_string(lineno) + ": empty key");
    out[key] = val;
  }
  return out;
}

}  // namespace morse
