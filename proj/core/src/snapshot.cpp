#include "snse/snapshot.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace snse {
namespace {

constexpr char kMagic[4] = {'S', 'N', 'S', 'E'};
constexpr std::uint32_t kFormatVersion = 1;

void write_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_component(std::ofstream& out, const ScalarField& f) {
  ScalarField g = f;
  g.to_physical();
  // Little-endian host assumed; this artifact targets x86-64/aarch64 Linux.
  out.write(reinterpret_cast<const char*>(g.phys().data()),
            static_cast<std::streamsize>(g.phys().size() * sizeof(double)));
}

void open_header(std::ofstream& out, const std::string& path, std::uint32_t n,
                 std::uint32_t ncomp) {
  out.open(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("snapshot: cannot open " + path);
  out.write(kMagic, 4);
  write_u32(out, kFormatVersion);
  write_u32(out, n);
  write_u32(out, ncomp);
}

}  // namespace

void write_snapshot(const std::string& path, const VectorField& u) {
  std::ofstream out;
  open_header(out, path, static_cast<std::uint32_t>(u.spec().n), 3);
  for (int j = 0; j < 3; ++j) write_component(out, u[j]);
  if (!out) throw std::runtime_error("snapshot: write failed for " + path);
}

void write_snapshot(const std::string& path, const ScalarField& f) {
  std::ofstream out;
  open_header(out, path, static_cast<std::uint32_t>(f.spec().n), 1);
  write_component(out, f);
  if (!out) throw std::runtime_error("snapshot: write failed for " + path);
}

VectorField read_snapshot_vector(const std::string& path, const GridPtr& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("snapshot: bad magic in " + path);
  }
  const std::uint32_t version = read_u32(in);
  const std::uint32_t n = read_u32(in);
  const std::uint32_t ncomp = read_u32(in);
  if (version != kFormatVersion) throw std::runtime_error("snapshot: unknown version");
  if (n != static_cast<std::uint32_t>(grid->n()) || ncomp != 3) {
    throw std::runtime_error("snapshot: shape mismatch in " + path);
  }
  VectorField u(grid, Rep::physical);
  for (int j = 0; j < 3; ++j) {
    in.read(reinterpret_cast<char*>(u[j].phys().data()),
            static_cast<std::streamsize>(u[j].phys().size() * sizeof(double)));
  }
  if (!in) throw std::runtime_error("snapshot: truncated file " + path);
  return u;
}

}  // namespace snse
