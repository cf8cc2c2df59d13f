#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ecmkit/kernel_profile.hpp"
#include "ecmkit/machine_model.hpp"

namespace ecmkit {

enum class Residency { L1, L2, Mem };

/// How the data-transfer time contributions combine. PartialL1 is the
/// validated hypothesis for the shipped machine: store cycles overlap with
/// L1<->L2 transfers but load cycles do not, and memory transfers overlap
/// fully with everything else. SumAll and FullOverlap exist for sensitivity
/// studies.
enum class OverlapHypothesis { PartialL1, SumAll, FullOverlap };

struct InCoreTimes {
    double t_c_ol = 0.0;
    double t_l1_ld = 0.0;
    double t_l1_st = 0.0;
};

struct EcmPrediction {
    std::string kernel;
    std::string unit;
    double t_c_ol = 0.0;
    double t_l1_ld = 0.0;
    double t_l1_st = 0.0;
    std::optional<double> t_l2;   // present when the profile has L1<->L2 volumes
    std::optional<double> t_mem;  // present when the profile has L2<->MEM volumes
    double t_ecm_l1 = 0.0;
    std::optional<double> t_ecm_l2;
    std::optional<double> t_ecm_mem;

    /// Cycles per unit for the requested data-set residency; throws
    /// validation_error when the profile lacks the volumes for it.
    double t_ecm(Residency r) const;
};

struct SaturationResult {
    double b1 = 0.0;       // single-core memory bandwidth, bytes/s (Eq. 4 analogue)
    int n_sat = 0;         // cores needed to reach the domain bandwidth
    bool saturates = false; // n_sat <= cores_per_domain
    std::vector<double> t_ecm_n; // t_ecm_n[i] = predicted cy/unit on i+1 cores

    double at(int cores) const; // T_ECM(1)/min(n, n_sat) for any n >= 1
};

struct CrsLatencyBound {
    double cycles_per_row = 0.0;
    double implied_domain_bw = 0.0; // bytes/s
    double implied_perf = 0.0;      // flops/s at the 1/6 flop/byte intensity cap
};

enum class BwScope { Domain, Chip };
enum class BwKind { Triad, ReadOnly };

/// In-core contributions: summed load/store throughput plus the port-pressure
/// maximum over everything that is not a load. Override times short-circuit
/// the computation.
InCoreTimes in_core_times(const KernelProfile& profile, const MachineModel& model);

/// V_load/b_load + V_store/b_store for a cache boundary.
double transfer_time(double load_bytes, double store_bytes, const MemLevel& level);

/// The transfer-time combination f alone, without the in-core max.
double overlap_combine(OverlapHypothesis h, double t_l1_ld, double t_l1_st, double t_l2,
                       double t_mem);

EcmPrediction predict(const KernelProfile& profile, const MachineModel& model,
                      OverlapHypothesis h = OverlapHypothesis::PartialL1);

/// Linear bandwidth-scaling extension of a memory-residency prediction.
SaturationResult saturation(const EcmPrediction& pred, const KernelProfile& profile,
                            const MachineModel& model);

/// Latency-dominated bound for a row-wise sparse kernel that accumulates into
/// a single register and finishes each row with a horizontal reduction.
CrsLatencyBound crs_latency_bound(int nnzr, const MachineModel& model);

double roofline(double intensity, const MachineModel& model, BwScope scope = BwScope::Chip,
                BwKind kind = BwKind::Triad);

} // namespace ecmkit
