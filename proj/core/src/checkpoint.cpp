#include "irsjam/checkpoint.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace irsjam {

namespace {

constexpr const char* kMagic = "irsjam-checkpoint";
constexpr int kVersion = 1;

Variant variant_from_name(const std::string& s) {
  for (Variant v : {Variant::QOnly, Variant::PhcFixed, Variant::WolfPhc, Variant::FuzzyWolfPhc})
    if (variant_name(v) == s) return v;
  throw std::runtime_error("checkpoint: unknown variant " + s);
}

void write_doubles(std::ostream& os, const std::string& key, const std::vector<double>& v) {
  os << key << ' ' << v.size();
  os << std::hexfloat;
  for (double d : v) os << ' ' << d;
  os << std::defaultfloat << '\n';
}

std::vector<double> read_doubles(std::istream& is, const std::string& key) {
  std::string k;
  std::size_t n = 0;
  if (!(is >> k >> n) || k != key)
    throw std::runtime_error("checkpoint: expected section " + key);
  std::vector<double> v(n);
  for (double& d : v)
    if (!(is >> d)) throw std::runtime_error("checkpoint: truncated section " + key);
  return v;
}

}  // namespace

void save_checkpoint(const LearnerBundle& b, std::uint64_t config_hash,
                     const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  os << kMagic << " v" << kVersion << '\n';
  os << "config_hash " << config_hash << '\n';
  os << "variant " << variant_name(b.cfg.variant) << '\n';
  os << std::hexfloat;
  os << "params " << b.cfg.alpha << ' ' << b.cfg.gamma << ' ' << b.cfg.epsilon << ' '
     << b.cfg.xi_win << ' ' << b.cfg.xi_loss << ' ' << b.cfg.xi_fixed << ' '
     << b.cfg.fuzzy_width_scale << std::defaultfloat << ' ' << b.cfg.fuzzy_states << '\n';
  os << "dims " << b.n_states << ' ' << b.n_actions << ' ' << b.fuzzy.n_fuzzy << ' '
     << b.fuzzy.widths.size() << '\n';
  write_doubles(os, "q", b.q);
  write_doubles(os, "pi", b.pi);
  write_doubles(os, "pi_avg", b.pi_avg);
  os << "counts " << b.counts.size();
  for (auto c : b.counts) os << ' ' << c;
  os << '\n';
  std::vector<double> centers_flat;
  for (const auto& c : b.fuzzy.centers)
    centers_flat.insert(centers_flat.end(), c.begin(), c.end());
  write_doubles(os, "fuzzy_centers", centers_flat);
  write_doubles(os, "fuzzy_widths", b.fuzzy.widths);
  write_doubles(os, "fuzzy_q", b.fuzzy.q);
  write_doubles(os, "fuzzy_pi", b.fuzzy.pi);
  os << "xi " << std::hexfloat << b.xi << std::defaultfloat << '\n';
  if (!os) throw std::runtime_error("checkpoint write failed: " + path.string());
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path.string());
  std::string magic, version;
  is >> magic >> version;
  if (magic != kMagic || version != "v1")
    throw std::runtime_error("unrecognized checkpoint header in " + path.string());

  LoadedCheckpoint out;
  LearnerBundle& b = out.bundle;
  std::string key, variant;
  if (!(is >> key >> out.config_hash) || key != "config_hash")
    throw std::runtime_error("checkpoint: missing config_hash");
  if (!(is >> key >> variant) || key != "variant")
    throw std::runtime_error("checkpoint: missing variant");
  b.cfg.variant = variant_from_name(variant);
  if (!(is >> key >> b.cfg.alpha >> b.cfg.gamma >> b.cfg.epsilon >> b.cfg.xi_win >>
        b.cfg.xi_loss >> b.cfg.xi_fixed >> b.cfg.fuzzy_width_scale >> b.cfg.fuzzy_states) ||
      key != "params")
    throw std::runtime_error("checkpoint: missing params");
  std::size_t n_fuzzy = 0, dim = 0;
  if (!(is >> key >> b.n_states >> b.n_actions >> n_fuzzy >> dim) || key != "dims")
    throw std::runtime_error("checkpoint: missing dims");
  b.q = read_doubles(is, "q");
  b.pi = read_doubles(is, "pi");
  b.pi_avg = read_doubles(is, "pi_avg");
  std::size_t n_counts = 0;
  if (!(is >> key >> n_counts) || key != "counts")
    throw std::runtime_error("checkpoint: missing counts");
  b.counts.resize(n_counts);
  for (auto& c : b.counts)
    if (!(is >> c)) throw std::runtime_error("checkpoint: truncated counts");
  const auto centers_flat = read_doubles(is, "fuzzy_centers");
  b.fuzzy.widths = read_doubles(is, "fuzzy_widths");
  b.fuzzy.q = read_doubles(is, "fuzzy_q");
  b.fuzzy.pi = read_doubles(is, "fuzzy_pi");
  b.fuzzy.n_fuzzy = n_fuzzy;
  b.fuzzy.n_actions = n_fuzzy ? b.fuzzy.q.size() / n_fuzzy : 0;
  if (dim && n_fuzzy) {
    if (centers_flat.size() != n_fuzzy * dim)
      throw std::runtime_error("checkpoint: center table size mismatch");
    b.fuzzy.centers.assign(n_fuzzy, std::vector<double>(dim));
    for (std::size_t l = 0; l < n_fuzzy; ++l)
      for (std::size_t d = 0; d < dim; ++d)
        b.fuzzy.centers[l][d] = centers_flat[l * dim + d];
  }
  if (!(is >> key >> b.xi) || key != "xi")
    throw std::runtime_error("checkpoint: missing xi");
  return out;
}

}  // namespace irsjam
