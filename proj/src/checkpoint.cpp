#include "mlb/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace mlb {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian");

namespace {

constexpr char kMagic[4] = {'M', 'L', 'B', '1'};
constexpr std::uint32_t kVersion = 1;

enum ElementTag : std::uint8_t { kF64 = 0, kC128 = 1, kBytes = 2 };

struct Writer {
  std::ofstream out;
  explicit Writer(const std::string& path)
      : out(path, std::ios::binary | std::ios::trunc) {
    if (!out) throw NumericalError("cannot open checkpoint for writing: " + path);
  }
  void raw(const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), std::streamsize(n));
  }
  template <class T>
  void pod(T v) {
    raw(&v, sizeof v);
  }
  void block(const std::string& name, ElementTag tag,
             const std::vector<std::uint64_t>& shape, const void* data,
             std::size_t bytes) {
    pod(std::uint32_t(name.size()));
    raw(name.data(), name.size());
    pod(std::uint8_t(tag));
    pod(std::uint32_t(shape.size()));
    for (auto d : shape) pod(d);
    raw(data, bytes);
  }
};

struct Reader {
  std::ifstream in;
  explicit Reader(const std::string& path) : in(path, std::ios::binary) {
    if (!in) throw NumericalError("cannot open checkpoint: " + path);
  }
  void raw(void* p, std::size_t n) {
    in.read(static_cast<char*>(p), std::streamsize(n));
    if (!in) throw NumericalError("truncated checkpoint");
  }
  template <class T>
  T pod() {
    T v;
    raw(&v, sizeof v);
    return v;
  }
};

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& chk) {
  Writer w(path);
  w.raw(kMagic, 4);
  w.pod(kVersion);
  const auto& st = chk.state;
  const std::uint32_t s = std::uint32_t(st.coeff.size());
  w.pod(std::uint32_t(5 + 2 * s));  // t, dt_next, err_old, A, C*, Phi*, config

  w.block("t", kF64, {}, &st.time, sizeof(double));
  w.block("dt_next", kF64, {}, &chk.dt_next, sizeof(double));
  w.block("err_old", kF64, {}, &chk.err_old, sizeof(double));
  w.block("A", kC128, {std::uint64_t(st.top.size())}, st.top.data(),
          sizeof(Complex) * st.top.size());
  for (std::uint32_t i = 0; i < s; ++i) {
    const auto& c = st.coeff[i];
    w.block("C" + std::to_string(i), kC128,
            {std::uint64_t(c.rows()), std::uint64_t(c.cols())}, c.data(),
            sizeof(Complex) * c.size());
  }
  for (std::uint32_t i = 0; i < s; ++i) {
    const auto& p = st.spf[i];
    w.block("Phi" + std::to_string(i), kC128,
            {std::uint64_t(p.rows()), std::uint64_t(p.cols())}, p.data(),
            sizeof(Complex) * p.size());
  }
  w.block("config", kBytes, {std::uint64_t(chk.config_json.size())},
          chk.config_json.data(), chk.config_json.size());
  if (!w.out) throw NumericalError("checkpoint write failed: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.raw(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw NumericalError("not a checkpoint file: " + path);
  if (r.pod<std::uint32_t>() != kVersion)
    throw NumericalError("unsupported checkpoint version");

  Checkpoint chk;
  const std::uint32_t blocks = r.pod<std::uint32_t>();
  for (std::uint32_t b = 0; b < blocks; ++b) {
    const auto nlen = r.pod<std::uint32_t>();
    std::string name(nlen, '\0');
    r.raw(name.data(), nlen);
    const auto tag = r.pod<std::uint8_t>();
    const auto rank = r.pod<std::uint32_t>();
    std::vector<std::uint64_t> shape(rank);
    for (auto& d : shape) d = r.pod<std::uint64_t>();
    std::uint64_t count = 1;
    for (auto d : shape) count *= d;

    if (name == "t" || name == "dt_next" || name == "err_old") {
      double v = r.pod<double>();
      if (name == "t")
        chk.state.time = v;
      else if (name == "dt_next")
        chk.dt_next = v;
      else
        chk.err_old = v;
    } else if (name == "A") {
      chk.state.top.resize(Eigen::Index(count));
      r.raw(chk.state.top.data(), sizeof(Complex) * count);
    } else if (name.rfind("C", 0) == 0 && tag == kC128) {
      const std::size_t idx = std::stoul(name.substr(1));
      if (chk.state.coeff.size() <= idx) chk.state.coeff.resize(idx + 1);
      auto& m = chk.state.coeff[idx];
      m.resize(Eigen::Index(shape.at(0)), Eigen::Index(shape.at(1)));
      r.raw(m.data(), sizeof(Complex) * count);
    } else if (name.rfind("Phi", 0) == 0) {
      const std::size_t idx = std::stoul(name.substr(3));
      if (chk.state.spf.size() <= idx) chk.state.spf.resize(idx + 1);
      auto& m = chk.state.spf[idx];
      m.resize(Eigen::Index(shape.at(0)), Eigen::Index(shape.at(1)));
      r.raw(m.data(), sizeof(Complex) * count);
    } else if (name == "config") {
      chk.config_json.resize(count);
      r.raw(chk.config_json.data(), count);
    } else {
      throw NumericalError("unknown checkpoint block: " + name);
    }
  }
  return chk;
}

}  // namespace mlb
