// ecmkit: analytic performance modeling (ECM, roofline, layer conditions)
// with sparse-matrix and domain-wall stencil kernels plus an LRU cache
// simulator as ground truth.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "ecmkit/cache_sim.hpp"
#include "ecmkit/dw.hpp"
#include "ecmkit/ecm.hpp"
#include "ecmkit/errors.hpp"
#include "ecmkit/matrix_market.hpp"
#include "ecmkit/report.hpp"
#include "ecmkit/spmv.hpp"

using namespace ecmkit;

namespace {

namespace fs = std::filesystem;

std::string data_dir() {
    if (const char* env = std::getenv("ECMKIT_DATA")) return env;
#ifdef ECMKIT_DATA_DIR
    return ECMKIT_DATA_DIR;
#else
    return "data";
#endif
}

std::string resolve(const std::string& arg, const std::string& subdir, const std::string& ext) {
    if (fs::exists(arg)) return arg;
    std::string candidate = data_dir() + "/" + subdir + "/" + arg + ext;
    if (fs::exists(candidate)) return candidate;
    throw io_error("cannot find '" + arg + "' (also tried " + candidate + ")");
}

LatticeGeometry parse_geom(const std::string& spec, const std::string& layout) {
    LatticeGeometry g;
    int vals[5];
    int n = std::sscanf(spec.c_str(), "%d,%d,%d,%d,%d", &vals[0], &vals[1], &vals[2], &vals[3],
                        &vals[4]);
    if (n != 5) throw validation_error("--geom expects Lx,Ly,Lz,Lt,Ls");
    g.lx = vals[0];
    g.ly = vals[1];
    g.lz = vals[2];
    g.lt = vals[3];
    g.ls = vals[4];
    if (layout == "riri")
        g.layout = Layout::Riri;
    else if (layout == "rrii")
        g.layout = Layout::Rrii;
    else
        throw validation_error("--layout must be riri or rrii");
    g.validate();
    return g;
}

std::pair<int, int> parse_range(const std::string& spec) {
    int lo = 0, hi = 0;
    if (std::sscanf(spec.c_str(), "%d:%d", &lo, &hi) != 2 || lo < 1 || hi < lo)
        throw validation_error("range must look like LO:HI");
    return {lo, hi};
}

CrsMatrix load_or_generate(const std::string& matrix, const std::string& gen) {
    if (!gen.empty()) {
        long a = 0, b = 0;
        if (std::sscanf(gen.c_str(), "drect:%ld:%ld", &a, &b) == 2) return gen_drect(a, b);
        if (std::sscanf(gen.c_str(), "hpcg:%ld", &a) == 1) return gen_hpcg(static_cast<int>(a));
        throw validation_error("--gen expects drect:ROWS:NNZR or hpcg:N");
    }
    if (matrix.empty()) throw validation_error("need --matrix or --gen");
    return read_matrix_market(matrix);
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// ---------------------------------------------------------------------------

int cmd_predict(const std::string& machine_arg, const std::string& kernel_arg, int cores,
                const std::string& residency, const std::string& hypothesis,
                const std::string& out) {
    std::string mpath = resolve(machine_arg, "machines", ".mm");
    std::string kpath = resolve(kernel_arg, "kernels", ".kp");
    MachineModel machine = load_machine_model(mpath);
    KernelProfile kernel = load_kernel_profile(kpath);

    OverlapHypothesis h = OverlapHypothesis::PartialL1;
    if (hypothesis == "sum")
        h = OverlapHypothesis::SumAll;
    else if (hypothesis == "full")
        h = OverlapHypothesis::FullOverlap;
    else if (hypothesis != "partial")
        throw validation_error("--hypothesis must be partial, sum or full");

    EcmPrediction pred = predict(kernel, machine, h);
    if (residency == "L2") (void)pred.t_ecm(Residency::L2);
    if (residency == "MEM") (void)pred.t_ecm(Residency::Mem);

    Report rep;
    rep.command = "predict";
    rep.input_digest = fnv1a_hex(digest_file(mpath) + digest_file(kpath));
    std::string cy = "cy/" + kernel.unit.substr(4); // per-VL -> cy/VL
    rep.add_column("kernel", "-");
    rep.add_column("t_c_ol", cy);
    rep.add_column("t_l1_ld", cy);
    rep.add_column("t_l1_st", cy);
    auto& row = rep.add_row();
    row.emplace_back(kernel.name);
    row.emplace_back(pred.t_c_ol);
    row.emplace_back(pred.t_l1_ld);
    row.emplace_back(pred.t_l1_st);
    if (pred.t_l2) {
        rep.add_column("t_l2", cy);
        row.emplace_back(*pred.t_l2);
    }
    if (pred.t_mem) {
        rep.add_column("t_mem", cy);
        row.emplace_back(*pred.t_mem);
    }
    bool want_l1 = residency.empty() || residency == "L1";
    bool want_l2 = (residency.empty() && pred.t_ecm_l2) || residency == "L2";
    bool want_mem = (residency.empty() && pred.t_ecm_mem) || residency == "MEM";
    if (want_l1) {
        rep.add_column("L1", cy);
        row.emplace_back(pred.t_ecm(Residency::L1));
    }
    if (want_l2) {
        rep.add_column("L2", cy);
        row.emplace_back(pred.t_ecm(Residency::L2));
    }
    if (want_mem) {
        rep.add_column("MEM", cy);
        row.emplace_back(pred.t_ecm(Residency::Mem));
        SaturationResult sat = saturation(pred, kernel, machine);
        rep.add_column("b1", "B/s");
        row.emplace_back(sat.b1);
        rep.add_column("n_sat", "cores");
        row.emplace_back(static_cast<double>(sat.n_sat));
        rep.add_column("saturates", "-");
        row.emplace_back(std::string(sat.saturates ? "yes" : "no"));
        rep.add_column("t_ecm_n", cy);
        row.emplace_back(sat.at(cores));
        rep.add_column("cores", "cores");
        row.emplace_back(static_cast<double>(cores));
    }
    rep.write(out);
    return 0;
}

int cmd_convert(const std::string& mtx, const std::string& gen, int C, long long sigma,
                bool rcm, const std::string& out) {
    CrsMatrix a = load_or_generate(mtx, gen);
    if (rcm) a = rcm_reorder(a).first;
    SellMatrix m = to_sell(a, C, sigma);
    if (!out.empty()) save_sell(m, out);

    Report rep;
    rep.command = "convert";
    rep.input_digest = mtx.empty() ? fnv1a_hex(gen) : digest_file(mtx);
    rep.add_column("matrix", "-");
    rep.add_column("nrows", "-");
    rep.add_column("ncols", "-");
    rep.add_column("nnz", "-");
    rep.add_column("C", "-");
    rep.add_column("sigma", "-");
    rep.add_column("chunks", "-");
    rep.add_column("beta", "-");
    auto& row = rep.add_row();
    row.emplace_back(mtx.empty() ? gen : mtx);
    row.emplace_back(static_cast<double>(m.nrows_orig));
    row.emplace_back(static_cast<double>(m.ncols));
    row.emplace_back(static_cast<double>(m.nnz_orig));
    row.emplace_back(static_cast<double>(m.C));
    row.emplace_back(static_cast<double>(m.sigma));
    row.emplace_back(static_cast<double>(m.nchunks()));
    row.emplace_back(m.beta);
    rep.write("-");
    return 0;
}

int cmd_spmv(const std::string& matrix, const std::string& gen, int C, long long sigma, int acc,
             int threads, int reps, bool rcm, const std::string& mode,
             const std::string& emit_trace, const std::string& out) {
    SpmvConfig cfg;
    cfg.accumulators = acc;
    cfg.threads = threads;
    cfg.partition_mode = mode == "nnz" ? PartitionMode::ByNnz : PartitionMode::ByRows;
    cfg.emit_trace = !emit_trace.empty();

    std::string name = matrix.empty() ? gen : matrix;
    std::string format = "crs";
    double beta = 1.0;
    std::int64_t nnz = 0, nrows = 0, ncols = 0;
    double seconds = 0.0;

    auto time_reps = [&](auto&& fn) {
        auto start = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r) fn();
        seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    if (ends_with(name, ".sell")) {
        SellMatrix m = load_sell(name);
        format = "sell";
        beta = m.beta;
        nnz = m.nnz_orig;
        nrows = m.nrows_orig;
        ncols = m.ncols;
        C = m.C;
        sigma = m.sigma;
        std::vector<double> x(m.ncols, 1.0), y(m.nrows_padded, 0.0);
        time_reps([&] { spmv_sell(m, x, y, cfg); });
        if (cfg.emit_trace) save_trace(spmv_trace(m, cfg), emit_trace);
    } else {
        CrsMatrix a = load_or_generate(matrix, gen);
        if (rcm) a = rcm_reorder(a).first;
        nnz = a.nnz();
        nrows = a.nrows;
        ncols = a.ncols;
        if (C > 0) {
            SellMatrix m = to_sell(a, C, sigma > 0 ? sigma : 1);
            format = "sell";
            beta = m.beta;
            sigma = m.sigma;
            std::vector<double> x(m.ncols, 1.0), y(m.nrows_padded, 0.0);
            time_reps([&] { spmv_sell(m, x, y, cfg); });
            if (cfg.emit_trace) save_trace(spmv_trace(m, cfg), emit_trace);
        } else {
            std::vector<double> x(a.ncols, 1.0), y(a.nrows, 0.0);
            time_reps([&] { spmv_crs(a, x, y, cfg); });
            if (cfg.emit_trace) save_trace(spmv_trace(a, cfg), emit_trace);
        }
    }

    double gflops = seconds > 0 ? 2.0 * nnz * reps / seconds / 1e9 : 0.0;
    SpmvVolume vol = spmv_volume(nnz, nrows, ncols);

    Report rep;
    rep.command = "spmv";
    rep.input_digest = matrix.empty() ? fnv1a_hex(gen) : digest_file(matrix);
    rep.add_column("matrix", "-");
    rep.add_column("format", "-");
    rep.add_column("C", "-");
    rep.add_column("sigma", "-");
    rep.add_column("threads", "-");
    rep.add_column("gflops", "Gflop/s");
    rep.add_column("intensity", "flop/B");
    rep.add_column("beta", "-");
    auto& row = rep.add_row();
    row.emplace_back(name);
    row.emplace_back(format);
    row.emplace_back(static_cast<double>(format == "sell" ? C : 0));
    row.emplace_back(static_cast<double>(format == "sell" ? sigma : 0));
    row.emplace_back(static_cast<double>(threads));
    row.emplace_back(gflops);
    row.emplace_back(vol.intensity);
    row.emplace_back(beta);
    rep.write(out);
    return 0;
}

int cmd_dw(const std::string& geom_spec, const std::string& layout, bool check_oracle, bool lc,
           int cores, int threads, int reps, const std::string& machine_arg,
           const std::string& emit_trace, const std::string& out) {
    LatticeGeometry g = parse_geom(geom_spec, layout);
    MachineModel machine = load_machine_model(resolve(machine_arg, "machines", ".mm"));

    if (!emit_trace.empty()) {
        DwTraceSource src(g, cores);
        save_trace(materialize_trace(src), emit_trace);
    }

    Report rep;
    rep.command = "dw";
    rep.input_digest = fnv1a_hex(geom_spec + layout);
    rep.add_column("quantity", "-");
    rep.add_column("value", "-");
    rep.add_column("unit", "-");
    auto put = [&](const std::string& q, double v, const std::string& u) {
        auto& row = rep.add_row();
        row.emplace_back(q);
        row.emplace_back(v);
        row.emplace_back(u);
    };

    put("lups", static_cast<double>(g.lups()), "LUP");
    put("flops_nominal", kDwFlopsNominal, "flop/LUP");
    put("flops_executed", dw_flops_executed(g.layout), "flop/LUP");
    put("footprint", dw_footprint_bytes_per_lup(), "B/LUP");

    GaugeField u = GaugeField::random_links(g, 1);
    FermionField psi = FermionField::random(g, 2);
    auto start = std::chrono::steady_clock::now();
    FermionField outp = dw_apply(u, psi, threads);
    for (int r = 1; r < reps; ++r) outp = dw_apply(u, psi, threads);
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    put("gflops", kDwFlopsNominal * static_cast<double>(g.lups()) * reps / seconds / 1e9,
        "Gflop/s");

    if (check_oracle) {
        CrsMatrix m = dw_matrix(u, threads); // refuses oversized lattices
        std::vector<double> x = psi.to_vector();
        std::vector<double> y(x.size(), 0.0);
        spmv_crs(m, x, y, SpmvConfig{});
        std::vector<double> direct = outp.to_vector();
        double scale = 1.0, err = 0.0;
        for (double v : direct) scale = std::max(scale, std::abs(v));
        for (size_t i = 0; i < y.size(); ++i) err = std::max(err, std::abs(y[i] - direct[i]));
        put("oracle_rel_err", err / scale, "-");
    }

    if (lc) {
        for (const char* level : {"L1", "L2"}) {
            int share_cores = machine.level(level).shared_by_cores > 1 ? cores : 1;
            LcReport r = lc_analyze(g, static_cast<double>(machine.level(level).capacity_bytes),
                                    LcMode::Vectorized, share_cores);
            auto& row = rep.add_row();
            row.emplace_back(std::string(level) + "_condition");
            row.emplace_back(std::string(lc_name(r.condition())));
            row.emplace_back(std::string("-"));
            put(std::string(level) + "_v_next", r.v_bytes_per_lup(), "B/LUP");
            put(std::string(level) + "_share", r.share_bytes, "B");
        }
        KernelProfile prof = dw_ecm_profile(g, OverrideTimes{0, 0, 0}, machine, cores);
        EcmPrediction pred = predict(prof, machine);
        put("t_l2", *pred.t_l2, "cy/LUP");
        put("t_mem", *pred.t_mem, "cy/LUP");
    }

    rep.write(out);
    return 0;
}

int cmd_lc_scan(const std::string& geom_spec, const std::string& layout, const std::string& dim,
                const std::string& range_spec, const std::string& cores_spec, bool no_sim,
                const std::string& machine_arg, const std::string& out) {
    MachineModel machine = load_machine_model(resolve(machine_arg, "machines", ".mm"));
    double l2 = static_cast<double>(machine.level("L2").capacity_bytes);
    std::uint64_t l1 = machine.level("L1").capacity_bytes;

    Report rep;
    rep.command = "lc-scan";
    rep.input_digest = fnv1a_hex(geom_spec + layout + dim + range_spec + cores_spec);
    bool core_mode = !cores_spec.empty();
    rep.add_column(core_mode ? "cores" : ("l" + dim), "-");
    rep.add_column("condition", "-");
    rep.add_column("lc_vmem", "B/LUP");
    if (!no_sim) rep.add_column("sim_vmem", "B/LUP");

    auto simulate_steady = [&](const LatticeGeometry& g, int cores) {
        SimConfig cfg;
        cfg.line_bytes = machine.level("L1").line_bytes;
        cfg.l1_capacity = l1;
        cfg.l2_capacity = static_cast<std::uint64_t>(l2);
        cfg.l2_shared_by = machine.level("L2").shared_by_cores;
        DwTraceSource once(g, cores, 1), twice(g, cores, 2);
        TrafficReport r1 = simulate(once, cfg);
        TrafficReport r2 = simulate(twice, cfg);
        return static_cast<double>(r2.l2_mem.total() - r1.l2_mem.total()) / g.lups();
    };

    auto emit = [&](double key, const LatticeGeometry& g, int cores) {
        LcReport r = lc_analyze(g, l2, LcMode::Vectorized, cores);
        auto& row = rep.add_row();
        row.emplace_back(key);
        row.emplace_back(std::string(lc_name(r.condition())));
        row.emplace_back(r.v_bytes_per_lup());
        if (!no_sim) row.emplace_back(simulate_steady(g, cores));
    };

    if (core_mode) {
        auto [lo, hi] = parse_range(cores_spec);
        LatticeGeometry g = parse_geom(geom_spec, layout);
        for (int n = lo; n <= hi; ++n) emit(n, g, n);
    } else {
        auto [lo, hi] = parse_range(range_spec);
        for (int v = lo; v <= hi; ++v) {
            LatticeGeometry g = parse_geom(geom_spec, layout);
            if (dim == "x")
                g.lx = v;
            else if (dim == "y")
                g.ly = v;
            else if (dim == "z")
                g.lz = v;
            else if (dim == "t")
                g.lt = v;
            else
                throw validation_error("--dim must be one of x, y, z, t");
            g.validate();
            emit(v, g, 1);
        }
    }
    rep.write(out);
    return 0;
}

int cmd_simulate(const std::string& trace_path, std::uint64_t l1, std::uint64_t l2, int shared,
                 std::uint64_t line, const std::vector<std::string>& partitions,
                 const std::string& out) {
    AccessTrace trace = load_trace(trace_path);
    SimConfig cfg;
    cfg.line_bytes = line;
    cfg.l1_capacity = l1;
    cfg.l2_capacity = l2;
    cfg.l2_shared_by = shared;
    for (const std::string& p : partitions) {
        size_t colon = p.rfind(':');
        if (colon == std::string::npos)
            throw validation_error("--l2-partition expects TAG:FRACTION");
        cfg.l2_partitions[p.substr(0, colon)] = std::stod(p.substr(colon + 1));
    }

    TrafficReport r = simulate(trace, cfg);
    Report rep;
    rep.command = "simulate";
    rep.input_digest = digest_file(trace_path);
    rep.add_column("boundary", "-");
    rep.add_column("load", "B");
    rep.add_column("store", "B");
    rep.add_column("total", "B");
    rep.add_column("per_unit", "B/unit");
    auto put = [&](const char* name, const BoundaryTraffic& b) {
        auto& row = rep.add_row();
        row.emplace_back(std::string(name));
        row.emplace_back(static_cast<double>(b.load_bytes));
        row.emplace_back(static_cast<double>(b.store_bytes));
        row.emplace_back(static_cast<double>(b.total()));
        row.emplace_back(r.norm_units ? static_cast<double>(b.total()) / r.norm_units : 0.0);
    };
    put("L1<->L2", r.l1_l2);
    put("L2<->MEM", r.l2_mem);
    rep.write(out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ecmkit: ECM and layer-condition performance modeling toolkit"};
    app.require_subcommand(1);

    // predict
    std::string machine = "a64fx_fx1000", kernel, residency, hypothesis = "partial", out;
    int cores = 1;
    auto* predict_cmd = app.add_subcommand("predict", "ECM prediction for a kernel profile");
    predict_cmd->add_option("--machine", machine, "machine model file or name");
    predict_cmd->add_option("--kernel", kernel, "kernel profile file or name")->required();
    predict_cmd->add_option("--cores", cores, "core count for the multicore prediction");
    predict_cmd->add_option("--residency", residency, "L1, L2 or MEM");
    predict_cmd->add_option("--hypothesis", hypothesis, "partial (default), sum or full");
    predict_cmd->add_option("--out", out, "output file (.json or .csv); default stdout");

    // convert
    std::string mtx, gen, sell_out;
    int C = 16;
    long long sigma = 1;
    bool rcm = false;
    auto* convert_cmd = app.add_subcommand("convert", "convert a matrix to SELL-C-sigma");
    convert_cmd->add_option("--mtx", mtx, "Matrix Market input");
    convert_cmd->add_option("--gen", gen, "generate input: drect:ROWS:NNZR or hpcg:N");
    convert_cmd->add_option("--C", C, "chunk height");
    convert_cmd->add_option("--sigma", sigma, "sorting scope");
    convert_cmd->add_flag("--rcm", rcm, "apply reverse Cuthill-McKee first");
    convert_cmd->add_option("--out", sell_out, "output .sell file");

    // spmv
    std::string matrix, mode = "rows", emit_trace;
    int acc = 1, threads = 1, reps = 10, spmv_c = 0;
    long long spmv_sigma = 0;
    auto* spmv_cmd = app.add_subcommand("spmv", "run y += A x and report throughput");
    spmv_cmd->add_option("--matrix", matrix, ".mtx or .sell input");
    spmv_cmd->add_option("--gen", gen, "generate input: drect:ROWS:NNZR or hpcg:N");
    spmv_cmd->add_option("--C", spmv_c, "convert to SELL with this chunk height");
    spmv_cmd->add_option("--sigma", spmv_sigma, "sorting scope for --C");
    spmv_cmd->add_option("--acc", acc, "accumulators (MVE width)");
    spmv_cmd->add_option("--threads", threads, "worker threads");
    spmv_cmd->add_option("--reps", reps, "repetitions");
    spmv_cmd->add_flag("--rcm", rcm, "apply reverse Cuthill-McKee first");
    spmv_cmd->add_option("--mode", mode, "partitioning: rows or nnz");
    spmv_cmd->add_option("--emit-trace", emit_trace, "write an access trace file");
    spmv_cmd->add_option("--out", out, "output file; default stdout");

    // dw
    std::string geom = "8,8,8,8,8", layout = "riri";
    bool check_oracle = false, lc = false;
    int dw_reps = 1;
    auto* dw_cmd = app.add_subcommand("dw", "domain-wall stencil kernel");
    dw_cmd->add_option("--geom", geom, "Lx,Ly,Lz,Lt,Ls");
    dw_cmd->add_option("--layout", layout, "riri or rrii");
    dw_cmd->add_flag("--check-oracle", check_oracle, "verify against the explicit matrix");
    dw_cmd->add_flag("--lc", lc, "report layer conditions and transfer times");
    dw_cmd->add_option("--cores", cores, "cores sharing the L2 for the layer conditions");
    dw_cmd->add_option("--threads", threads, "worker threads");
    dw_cmd->add_option("--reps", dw_reps, "repetitions");
    dw_cmd->add_option("--machine", machine, "machine model file or name");
    dw_cmd->add_option("--emit-trace", emit_trace, "write an access trace file");
    dw_cmd->add_option("--out", out, "output file; default stdout");

    // lc-scan
    std::string dim = "x", range, cores_range;
    bool no_sim = false;
    auto* scan_cmd = app.add_subcommand("lc-scan", "layer-condition scan vs simulation");
    scan_cmd->add_option("--geom", geom, "Lx,Ly,Lz,Lt,Ls");
    scan_cmd->add_option("--layout", layout, "riri or rrii");
    scan_cmd->add_option("--dim", dim, "dimension to sweep: x, y, z or t");
    scan_cmd->add_option("--range", range, "sweep range LO:HI");
    scan_cmd->add_option("--cores", cores_range, "core sweep LO:HI (overrides --dim)");
    scan_cmd->add_flag("--no-sim", no_sim, "analytic scan only");
    scan_cmd->add_option("--machine", machine, "machine model file or name");
    scan_cmd->add_option("--out", out, "output file; default stdout");

    // simulate
    std::string trace_path;
    std::uint64_t l1_cap = 64 * 1024, l2_cap = 8 * 1024 * 1024, line = 256;
    int shared_by = 12;
    std::vector<std::string> l2_parts;
    auto* sim_cmd = app.add_subcommand("simulate", "run a trace through the cache simulator");
    sim_cmd->add_option("--trace", trace_path, "trace file")->required();
    sim_cmd->add_option("--l1", l1_cap, "per-core L1 capacity in bytes");
    sim_cmd->add_option("--l2", l2_cap, "shared L2 capacity in bytes");
    sim_cmd->add_option("--line", line, "cache line bytes");
    sim_cmd->add_option("--shared-by", shared_by, "cores per shared L2");
    sim_cmd->add_option("--l2-partition", l2_parts, "sector partition TAG:FRACTION");
    sim_cmd->add_option("--out", out, "output file; default stdout");

    try {
        app.parse(argc, argv);
        if (predict_cmd->parsed())
            return cmd_predict(machine, kernel, cores, residency, hypothesis, out);
        if (convert_cmd->parsed()) return cmd_convert(mtx, gen, C, sigma, rcm, sell_out);
        if (spmv_cmd->parsed())
            return cmd_spmv(matrix, gen, spmv_c, spmv_sigma, acc, threads, reps, rcm, mode,
                            emit_trace, out);
        if (dw_cmd->parsed())
            return cmd_dw(geom, layout, check_oracle, lc, cores, threads, dw_reps, machine,
                          emit_trace, out);
        if (scan_cmd->parsed())
            return cmd_lc_scan(geom, layout, dim, range, cores_range, no_sim, machine, out);
        if (sim_cmd->parsed())
            return cmd_simulate(trace_path, l1_cap, l2_cap, shared_by, line, l2_parts, out);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "ecmkit: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "ecmkit: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "ecmkit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "ecmkit: internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
