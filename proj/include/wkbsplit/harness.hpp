#pragma once

// Convergence-study driver: configuration, cached reference solutions,
// sweeps over (scheme, eps, nx, nt) and CSV persistence.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "wkbsplit/composition.hpp"
#include "wkbsplit/problem.hpp"

namespace wkbsplit {

/// How the time step of the (S, A) reference is chosen.
enum class ReferenceTime {
  fixed,    // strang at nt_ref steps (optionally refined)
  matched,  // the cell's own scheme and nt, only the grid is refined
};

struct ReferenceSettings {
  std::size_t nx_ref = 256;
  std::size_t nt_ref = 8192;
  std::size_t nx_ref_wave = 4096;
  ReferenceTime time = ReferenceTime::fixed;
  /// Keep doubling nt_ref (up to nt_ref_max) until successive references
  /// differ by less than refine_tol in relative L2.
  bool refine = false;
  double refine_tol = 1e-9;
  std::size_t nt_ref_max = 65536;
};

struct SweepConfig {
  std::vector<SchemeKind> schemes{SchemeKind::lie_1234};
  std::vector<double> eps{1.0, 0.25, 0.0625, 0.015625, 0.00390625, 0.0009765625};
  std::vector<std::size_t> nx{128};
  std::vector<std::size_t> nt{32, 64, 128, 256, 512, 1024, 2048};
  double t_final = 0.2;

  /// "paper41" for the built-in caustic benchmark, "expr" to use the
  /// expression strings below.
  std::string data = "paper41";
  std::string s0_expr = "sin(x)/2";
  std::string a0_expr = "sin(x)";
  std::string a0_im_expr = "0";
  std::string v_expr = "sin(x)/(1+cos(x)^2)";

  ReferenceSettings reference{};
  double s = 2.0;
  bool dealias = false;
  std::string output = "sweep.csv";
  std::string cache_dir = ".wkbsplit-cache";
  std::size_t workers = 0;  // 0: one per hardware thread

  InitialData initial_data() const;
  /// Throws ConfigError (line 0) on violated invariants.
  void validate() const;
};

/// Parses the key = value format. Unknown keys, malformed values and empty
/// lists raise ConfigError carrying the 1-based line number.
SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::filesystem::path& path);

enum class RecordStatus { ok, diverged };
std::string_view to_string(RecordStatus status);

struct ErrorRecord {
  std::string scheme;
  double eps = 0.0;
  std::size_t nx = 0;
  std::size_t nt = 0;
  double h = 0.0;
  double dx = 0.0;
  double t_final = 0.0;
  double err_rho = 0.0;
  double err_psi = 0.0;
  double err_sa = 0.0;
  double mass_drift_rel = 0.0;
  double wallclock_seconds = 0.0;
  RecordStatus status = RecordStatus::ok;
  std::string reference_id;
};

/// Reference solutions at one initial datum and final time. Each distinct
/// reference is computed once; concurrent callers wait on the same result.
/// With a non-empty cache directory, results are also persisted as text.
class ReferenceStore {
 public:
  struct Wkb {
    WkbState state;
    std::string id;
  };
  struct Wave {
    WaveState state;
    std::string id;
  };

  ReferenceStore(InitialData data, double t_final, bool dealias, std::filesystem::path cache_dir);

  /// (S, A) evolved by `scheme` on nx nodes with nt steps.
  std::shared_ptr<const Wkb> wkb(SchemeKind scheme, double eps, std::size_t nx, std::size_t nt);
  /// Psi evolved by the order-4 TSSP on nx nodes with nt steps.
  std::shared_ptr<const Wave> wave(double eps, std::size_t nx, std::size_t nt);

  /// Applies the refinement protocol of `settings` starting from nt_ref.
  std::shared_ptr<const Wkb> refined_wkb(double eps, const ReferenceSettings& settings);
  std::shared_ptr<const Wave> refined_wave(double eps, const ReferenceSettings& settings);

  /// FNV-1a digest of the initial data, final time and dealiasing flag.
  const std::string& data_hash() const { return data_hash_; }

 private:
  template <class T>
  using Slot = std::shared_future<std::shared_ptr<const T>>;

  std::filesystem::path cache_file(std::string_view kind, std::string_view scheme, double eps,
                                   std::size_t nx, std::size_t nt) const;

  InitialData data_;
  double t_final_;
  bool dealias_;
  std::filesystem::path cache_dir_;
  std::string data_hash_;

  std::mutex mutex_;
  std::map<std::string, Slot<Wkb>> wkb_;
  std::map<std::string, Slot<Wave>> wave_;
};

/// Runs every (scheme, eps, nx, nt) cell of the sweep on a bounded worker
/// pool and returns the records sorted by (scheme, eps, nx, nt).
std::vector<ErrorRecord> run_convergence_sweep(const SweepConfig& cfg);

extern const char* const kCsvHeader;

std::string format_records(const std::vector<ErrorRecord>& records);
/// Throws IoError when the file cannot be written.
void write_records(const std::vector<ErrorRecord>& records, const std::filesystem::path& path);
/// Inverse of write_records. Throws IoError on unreadable or malformed input.
std::vector<ErrorRecord> read_records(const std::filesystem::path& path);

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace wkbsplit
