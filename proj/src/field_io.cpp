#include "nsac/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "nsac/errors.hpp"

namespace nsac {

namespace {

constexpr std::array<char, 5> kMagic{'N', 'S', 'A', 'C', '1'};
constexpr std::size_t kHeaderBytes = 5 + 2 * 4 + 4 * 8;

template <typename T>
T byteswap(T v) {
  std::array<unsigned char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  std::reverse(b.begin(), b.end());
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

template <typename T>
void put(std::string& buf, T v) {
  if constexpr (std::endian::native == std::endian::big) v = byteswap(v);
  const auto* p = reinterpret_cast<const char*>(&v);
  buf.append(p, sizeof(T));
}

template <typename T>
T get(const std::string& buf, std::size_t& pos) {
  T v;
  std::memcpy(&v, buf.data() + pos, sizeof(T));
  pos += sizeof(T);
  if constexpr (std::endian::native == std::endian::big) v = byteswap(v);
  return v;
}

bool plausible(std::uint64_t nx, std::uint64_t ny, std::size_t bytes) {
  return nx > 0 && ny > 0 && nx <= (1u << 24) && ny <= (1u << 24) && kHeaderBytes + 32 * nx * ny <= bytes;
}

}  // namespace

Snapshot Snapshot::from_state(const DiffuseState& s) {
  Snapshot out;
  out.nx = static_cast<std::uint32_t>(s.grid.nx);
  out.ny = static_cast<std::uint32_t>(s.grid.ny);
  out.lx = s.grid.lx;
  out.ly = s.grid.ly;
  out.t = s.t;
  out.eps = s.eps;
  out.c = s.c.values();
  out.vx = s.v.u.values();
  out.vy = s.v.v.values();
  out.p = s.p.size() == s.c.size() ? s.p.values() : std::vector<double>(s.c.size(), 0.0);
  return out;
}

DiffuseState Snapshot::to_state(BoundaryCondition bc) const {
  DiffuseState s;
  s.grid = GridSpec{nx, ny, lx, ly, bc};
  s.c = ScalarField2D(nx, ny);
  s.c.values() = c;
  s.v = MacVelocity(s.grid);
  s.v.u.values() = vx;
  s.v.v.values() = vy;
  s.p = ScalarField2D(nx, ny);
  s.p.values() = p;
  s.t = t;
  s.eps = eps;
  return s;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  const std::size_t n = static_cast<std::size_t>(snap.nx) * snap.ny;
  if (snap.c.size() != n || snap.vx.size() != n || snap.vy.size() != n || snap.p.size() != n)
    throw Error(ErrorCode::ShapeMismatch, "snapshot arrays do not match nx * ny");
  std::string buf;
  buf.reserve(kHeaderBytes + 32 * n);
  buf.append(kMagic.data(), kMagic.size());
  put(buf, snap.nx);
  put(buf, snap.ny);
  for (double x : {snap.lx, snap.ly, snap.t, snap.eps}) put(buf, x);
  for (const auto* arr : {&snap.c, &snap.vx, &snap.vy, &snap.p})
    for (double x : *arr) put(buf, x);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::BadConfig, "cannot open " + path.string() + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::BadConfig, "failed writing " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::BadConfig, "cannot open " + path.string());
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kMagic.size()) throw Error(ErrorCode::TruncatedFile, "file shorter than the magic");
  if (buf.compare(0, 4, "NSAC") != 0) throw Error(ErrorCode::BadMagic, "not an NSAC snapshot");
  if (buf[4] != kMagic[4]) throw Error(ErrorCode::VersionMismatch, "unsupported snapshot version");
  if (buf.size() < kHeaderBytes) throw Error(ErrorCode::TruncatedFile, "truncated header");
  std::size_t pos = 5;
  Snapshot s;
  s.nx = get<std::uint32_t>(buf, pos);
  s.ny = get<std::uint32_t>(buf, pos);
  if (!plausible(s.nx, s.ny, buf.size()) && plausible(byteswap(s.nx), byteswap(s.ny), buf.size()))
    throw Error(ErrorCode::VersionMismatch, "byte-swapped header; the format is little-endian");
  s.lx = get<double>(buf, pos);
  s.ly = get<double>(buf, pos);
  s.t = get<double>(buf, pos);
  s.eps = get<double>(buf, pos);
  const std::size_t n = static_cast<std::size_t>(s.nx) * s.ny;
  if (s.nx == 0 || s.ny == 0) throw Error(ErrorCode::BadMagic, "empty grid in header");
  if (buf.size() < kHeaderBytes + 4 * 8 * n) throw Error(ErrorCode::TruncatedFile, "truncated field data");
  for (auto* arr : {&s.c, &s.vx, &s.vy, &s.p}) {
    arr->resize(n);
    for (double& x : *arr) x = get<double>(buf, pos);
  }
  return s;
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : path_(path) {
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw Error(ErrorCode::BadConfig, "cannot open " + path_.string() + " for writing");
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  std::ofstream out(path_, std::ios::app);
  for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
  out << '\n';
  out.flush();
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadConfig, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> r;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        r.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::BadConfig, "non-numeric cell in " + path.string());
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace nsac
