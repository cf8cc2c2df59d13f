#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ecmkit {

/// Load/store traffic across one cache boundary, per profile unit,
/// write-allocate transfers already folded into the load side.
struct BoundaryVolume {
    double load_bytes = 0.0;
    double store_bytes = 0.0;
    double total() const { return load_bytes + store_bytes; }
};

/// One data stream of a kernel. Streams are a convenience layer: when a
/// profile gives no explicit per-boundary volumes they are derived from the
/// streams, adding one extra load of the store volume at every boundary for
/// streams with write-allocate semantics.
struct StreamSpec {
    std::string name;
    bool is_store = false;
    double bytes_per_unit = 0.0;
    bool write_allocate = false; // stores only; w = 2 traffic accounting
};

/// Pre-computed in-core times, used when the instruction mix comes from an
/// external analysis instead of an instruction-count profile.
struct OverrideTimes {
    double t_c_ol = 0.0;
    double t_l1_ld = 0.0;
    double t_l1_st = 0.0;
};

struct KernelProfile {
    std::string name;
    std::string unit = "per-VL"; // per-VL | per-LUP | per-iteration
    std::map<std::string, double> instr_counts;
    std::vector<StreamSpec> streams;
    std::optional<BoundaryVolume> vol_l1l2;
    std::optional<BoundaryVolume> vol_l2mem;
    bool load_dominated = false;
    std::optional<OverrideTimes> override_times;

    /// Fills missing per-boundary volumes from the stream list.
    void derive_volumes_from_streams();
};

KernelProfile load_kernel_profile(const std::string& path);
KernelProfile parse_kernel_profile(const std::string& text,
                                   const std::string& source = "<string>");
std::string serialize_kernel_profile(const KernelProfile& p);

} // namespace ecmkit
