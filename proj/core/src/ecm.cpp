#include "ecmkit/ecm.hpp"

#include <algorithm>
#include <cmath>

#include "ecmkit/errors.hpp"

namespace ecmkit {

double EcmPrediction::t_ecm(Residency r) const {
    switch (r) {
        case Residency::L1: return t_ecm_l1;
        case Residency::L2:
            if (!t_ecm_l2)
                throw validation_error("kernel '" + kernel + "': no L1<->L2 volumes, cannot "
                                       "predict L2 residency");
            return *t_ecm_l2;
        case Residency::Mem:
            if (!t_ecm_mem)
                throw validation_error("kernel '" + kernel + "': no L2<->MEM volumes, cannot "
                                       "predict memory residency");
            return *t_ecm_mem;
    }
    throw internal_error("bad residency");
}

double SaturationResult::at(int cores) const {
    if (cores < 1) throw validation_error("core count must be >= 1");
    if (t_ecm_n.empty()) throw internal_error("saturation table is empty");
    double t1 = t_ecm_n.front();
    return t1 / std::min(cores, n_sat);
}

InCoreTimes in_core_times(const KernelProfile& profile, const MachineModel& model) {
    if (profile.override_times) {
        const OverrideTimes& o = *profile.override_times;
        return InCoreTimes{o.t_c_ol, o.t_l1_ld, o.t_l1_st};
    }

    InCoreTimes t;
    std::map<std::string, double> port_pressure;
    for (const auto& [iclass, count] : profile.instr_counts) {
        const InstructionSpec& spec = lookup_instruction(model, iclass);
        if (count < 0) throw validation_error("negative count for instruction '" + iclass + "'");
        switch (spec.kind) {
            case InstrKind::Load: t.t_l1_ld += count * spec.recip_throughput_cy; break;
            case InstrKind::Store: t.t_l1_st += count * spec.recip_throughput_cy; break;
            default: break;
        }
        // Loads are the non-overlapping part; everything else, including the
        // cycles stores generate on the arithmetic pipelines, competes for
        // ports in the overlapping time.
        if (spec.kind != InstrKind::Load)
            for (const auto& [port, cy] : spec.port_cycles) port_pressure[port] += count * cy;
    }
    for (const auto& [port, cy] : port_pressure) t.t_c_ol = std::max(t.t_c_ol, cy);
    return t;
}

double transfer_time(double load_bytes, double store_bytes, const MemLevel& level) {
    if (load_bytes < 0 || store_bytes < 0) throw validation_error("negative transfer volume");
    if (level.load_bw <= 0 || level.store_bw <= 0)
        throw validation_error("level '" + level.name + "' has zero bandwidth");
    return load_bytes / level.load_bw + store_bytes / level.store_bw;
}

double overlap_combine(OverlapHypothesis h, double t_l1_ld, double t_l1_st, double t_l2,
                       double t_mem) {
    switch (h) {
        case OverlapHypothesis::PartialL1:
            return std::max(t_l1_ld + std::max(t_l1_st, t_l2), t_mem);
        case OverlapHypothesis::SumAll:
            return t_l1_ld + t_l1_st + t_l2 + t_mem;
        case OverlapHypothesis::FullOverlap:
            return std::max({t_l1_ld, t_l1_st, t_l2, t_mem});
    }
    throw internal_error("bad overlap hypothesis");
}

EcmPrediction predict(const KernelProfile& profile, const MachineModel& model,
                      OverlapHypothesis h) {
    InCoreTimes ic = in_core_times(profile, model);
    EcmPrediction p;
    p.kernel = profile.name;
    p.unit = profile.unit;
    p.t_c_ol = ic.t_c_ol;
    p.t_l1_ld = ic.t_l1_ld;
    p.t_l1_st = ic.t_l1_st;

    if (profile.vol_l1l2)
        p.t_l2 = transfer_time(profile.vol_l1l2->load_bytes, profile.vol_l1l2->store_bytes,
                               model.level("L2"));
    if (profile.vol_l2mem) {
        double b = model.mem_bytes_per_cycle(profile.load_dominated);
        if (b <= 0) throw validation_error("machine has zero memory bandwidth");
        p.t_mem = profile.vol_l2mem->total() / b;
    }

    p.t_ecm_l1 = std::max(ic.t_c_ol, overlap_combine(h, ic.t_l1_ld, ic.t_l1_st, 0.0, 0.0));
    if (p.t_l2)
        p.t_ecm_l2 = std::max(ic.t_c_ol, overlap_combine(h, ic.t_l1_ld, ic.t_l1_st, *p.t_l2, 0.0));
    if (p.t_l2 && p.t_mem)
        p.t_ecm_mem =
            std::max(ic.t_c_ol, overlap_combine(h, ic.t_l1_ld, ic.t_l1_st, *p.t_l2, *p.t_mem));
    return p;
}

SaturationResult saturation(const EcmPrediction& pred, const KernelProfile& profile,
                            const MachineModel& model) {
    if (!profile.vol_l2mem || profile.vol_l2mem->total() <= 0)
        throw validation_error("kernel '" + profile.name +
                               "': saturation analysis needs V_Mem > 0");
    double v_mem = profile.vol_l2mem->total();
    double t_ecm = pred.t_ecm(Residency::Mem);
    double b_domain = model.mem_bw_domain(profile.load_dominated);

    SaturationResult s;
    s.b1 = v_mem * model.clock_hz / t_ecm;
    s.n_sat = std::max(1, static_cast<int>(std::ceil(b_domain / s.b1 - 1e-9)));
    s.saturates = s.n_sat <= model.cores_per_domain;
    s.t_ecm_n.resize(model.cores_per_domain);
    for (int n = 1; n <= model.cores_per_domain; ++n)
        s.t_ecm_n[n - 1] = t_ecm / std::min(n, s.n_sat);
    return s;
}

CrsLatencyBound crs_latency_bound(int nnzr, const MachineModel& model) {
    if (nnzr < 1) throw validation_error("nnzr must be >= 1");
    int simd_doubles = model.simd_bytes / 8;
    double iters = std::ceil(static_cast<double>(nnzr) / simd_doubles);
    double fmla_lat = lookup_instruction(model, "fmla").latency_cy;
    double faddv_lat = lookup_instruction(model, "faddv").latency_cy;

    CrsLatencyBound b;
    b.cycles_per_row = iters * fmla_lat + faddv_lat;
    // 12 bytes of matrix data (value + 4-byte index) stream per nonzero.
    b.implied_domain_bw =
        model.cores_per_domain * model.clock_hz * (nnzr * 12.0) / b.cycles_per_row;
    b.implied_perf = b.implied_domain_bw / 6.0;
    return b;
}

double roofline(double intensity, const MachineModel& model, BwScope scope, BwKind kind) {
    if (intensity <= 0) throw validation_error("intensity must be > 0");
    double bw = 0.0;
    if (scope == BwScope::Chip)
        bw = kind == BwKind::Triad ? model.mem_bw_triad_chip : model.mem_bw_readonly_chip;
    else
        bw = kind == BwKind::Triad ? model.mem_bw_triad_domain : model.mem_bw_readonly_domain;
    return std::min(model.peak_flops, intensity * bw);
}

} // namespace ecmkit
