#include "wz/systems/snapshot.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace wz {
namespace {

constexpr std::array<char, 8> kMagic = {'W', 'Z', 'S', 'N', 'A', 'P', '1', '\0'};

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw std::runtime_error("snapshot: truncated header");
  return v;
}

}  // namespace

std::filesystem::path write_snapshot(const std::filesystem::path& dir, const std::string& name, long step, double time,
                                     const ScalarField& field) {
  std::filesystem::create_directories(dir);
  std::ostringstream fname;
  fname << name << '_' << std::setw(6) << std::setfill('0') << step << ".bin";
  const auto path = dir / fname.str();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path.string());
  os.write(kMagic.data(), kMagic.size());
  put<std::int32_t>(os, field.grid().n());
  put<double>(os, time);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
  os.write(name.data(), static_cast<std::streamsize>(name.size()));
  os.write(reinterpret_cast<const char*>(field.values().data()),
           static_cast<std::streamsize>(field.size() * sizeof(double)));
  if (!os) throw std::runtime_error("snapshot: write failed for " + path.string());

  std::ofstream index(dir / "index.txt", std::ios::app);
  index << std::setprecision(17) << "file=" << fname.str() << " name=" << name << " time=" << time
        << " n=" << field.grid().n() << '\n';
  return path;
}

Snapshot read_snapshot(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + file.string());
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw std::runtime_error("snapshot: bad magic in " + file.string());
  const auto n = get<std::int32_t>(is);
  const auto time = get<double>(is);
  const auto len = get<std::uint32_t>(is);
  if (n < 16 || n > (1 << 14) || len > 4096) throw std::runtime_error("snapshot: implausible header");
  std::string name(len, '\0');
  if (!is.read(name.data(), len)) throw std::runtime_error("snapshot: truncated name");
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  if (!is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double))))
    throw std::runtime_error("snapshot: truncated values");
  return {name, time, ScalarField(Grid(n), std::move(values))};
}

}  // namespace wz
