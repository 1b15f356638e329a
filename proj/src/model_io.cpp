#include "perception/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "perception/error.hpp"

namespace perception {
namespace {

constexpr char kMagic[8] = {'P', 'R', 'C', 'P', 'N', 'E', 'T', '\0'};

constexpr std::uint32_t kFlagEject = 1u << 0;
constexpr std::uint32_t kFlagReplacement = 1u << 1;
constexpr std::uint32_t kFlagStandardize = 1u << 2;
constexpr std::uint32_t kNeuronDegenerate = 1u << 0;

class Writer {
 public:
  template <typename T>
  void put(T value) {
    auto bits = static_cast<std::make_unsigned_t<T>>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bytes_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
  }
  void put_double(double v) { put(std::bit_cast<std::uint64_t>(v)); }
  void put_raw(const char* data, std::size_t n) { bytes_.insert(bytes_.end(), data, data + n); }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    std::make_unsigned_t<T> bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bits |= static_cast<std::make_unsigned_t<T>>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(bits);
  }
  double get_double() { return std::bit_cast<double>(get<std::uint64_t>()); }
  void get_raw(char* out, std::size_t n) {
    need(n);
    std::memcpy(out, bytes_.data() + pos_, n);
    pos_ += n;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw ModelFormatError("model file is truncated");
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_network(const NetworkModel& network) {
  const NetworkConfig& cfg = network.config;
  Writer w;
  w.put_raw(kMagic, sizeof(kMagic));
  w.put<std::uint32_t>(kModelFormatVersion);
  std::uint32_t flags = 0;
  if (cfg.eject) flags |= kFlagEject;
  if (cfg.with_replacement) flags |= kFlagReplacement;
  if (cfg.standardize) flags |= kFlagStandardize;
  w.put<std::uint32_t>(flags);
  w.put<std::uint64_t>(cfg.seed);
  w.put_double(cfg.subsample_mu);
  w.put_double(cfg.subsample_sigma);
  w.put<std::uint64_t>(cfg.subsample_min.value_or(0));
  w.put<std::uint64_t>(cfg.subsample_max.value_or(0));
  w.put<std::uint64_t>(cfg.fixed_subsample.value_or(0));
  w.put<std::int32_t>(cfg.scale_decimals);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(network.neurons.size()));
  w.put<std::uint64_t>(network.dims);
  w.put<std::int32_t>(network.scale_decimals);

  for (const TrainedNeuron& n : network.neurons) {
    const NeuronModel& m = n.detector.neuron;
    w.put<std::int64_t>(m.median);
    w.put<std::int64_t>(m.total_deviation);
    w.put<std::int64_t>(m.window_count);
    w.put<std::int32_t>(m.scale_decimals);
    w.put<std::uint32_t>(n.degenerate() ? kNeuronDegenerate : 0u);
    w.put<std::uint64_t>(n.drawn_size);
    w.put<std::uint64_t>(n.ejected_count);
    if (network.dims > 1) {
      for (double v : n.detector.center.medians) w.put_double(v);
      if (cfg.standardize) {
        for (double v : n.detector.center.spreads) w.put_double(v);
      }
    }
  }
  return w.take();
}

NetworkModel deserialize_network(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  char magic[sizeof(kMagic)];
  r.get_raw(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ModelFormatError("not a perception network model (bad magic)");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw ModelFormatError("unsupported model format version " + std::to_string(version));
  }
  NetworkModel net;
  NetworkConfig& cfg = net.config;
  const auto flags = r.get<std::uint32_t>();
  cfg.eject = flags & kFlagEject;
  cfg.with_replacement = flags & kFlagReplacement;
  cfg.standardize = flags & kFlagStandardize;
  cfg.seed = r.get<std::uint64_t>();
  cfg.subsample_mu = r.get_double();
  cfg.subsample_sigma = r.get_double();
  if (auto v = r.get<std::uint64_t>()) cfg.subsample_min = v;
  if (auto v = r.get<std::uint64_t>()) cfg.subsample_max = v;
  if (auto v = r.get<std::uint64_t>()) cfg.fixed_subsample = v;
  cfg.scale_decimals = r.get<std::int32_t>();
  cfg.n_neurons = r.get<std::uint32_t>();
  net.dims = r.get<std::uint64_t>();
  net.scale_decimals = r.get<std::int32_t>();
  if (net.dims == 0) throw ModelFormatError("model has zero features");

  net.neurons.resize(cfg.n_neurons);
  for (TrainedNeuron& n : net.neurons) {
    NeuronModel& m = n.detector.neuron;
    m.median = r.get<std::int64_t>();
    m.total_deviation = r.get<std::int64_t>();
    m.window_count = r.get<std::int64_t>();
    m.scale_decimals = r.get<std::int32_t>();
    const auto nflags = r.get<std::uint32_t>();
    n.drawn_size = r.get<std::uint64_t>();
    n.ejected_count = r.get<std::uint64_t>();
    if (n.ejected_count > n.drawn_size || m.window_count < 1 || m.total_deviation < 0 ||
        m.scale_decimals < 0 || m.scale_decimals > kMaxDecimals ||
        static_cast<bool>(nflags & kNeuronDegenerate) != m.degenerate()) {
      throw ModelFormatError("corrupt neuron record");
    }
    n.retained_count = n.drawn_size - n.ejected_count;
    if (net.dims > 1) {
      n.detector.center.medians.resize(net.dims);
      for (double& v : n.detector.center.medians) v = r.get_double();
      if (cfg.standardize) {
        n.detector.center.spreads.resize(net.dims);
        for (double& v : n.detector.center.spreads) v = r.get_double();
      }
    }
  }
  if (!r.done()) throw ModelFormatError("trailing bytes after model");
  cfg.validate();
  return net;
}

void save_network(const NetworkModel& network, const std::string& path) {
  const std::vector<std::uint8_t> bytes = serialize_network(network);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write model file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing model file: " + path);
}

NetworkModel load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_network(bytes);
}

}  // namespace perception
