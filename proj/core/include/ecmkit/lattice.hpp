#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace ecmkit {

enum class Layout { Riri, Rrii };

/// 4d space-time lattice with a fifth (s) dimension. Vectorization packs
/// sites from different partitions of the 4d volume into one SIMD vector:
/// the RIRI layout cuts t and z in half (4 sites per 512-bit vector of
/// double complex), the RRII layout additionally halves y (8 sites, reals
/// and imaginaries split).
struct LatticeGeometry {
    int lx = 0, ly = 0, lz = 0, lt = 0, ls = 0;
    Layout layout = Layout::Riri;

    int vl_sites() const { return layout == Layout::Riri ? 4 : 8; }
    bool cuts_y() const { return layout == Layout::Rrii; }
    int local_lx() const { return lx; }
    int local_ly() const { return cuts_y() ? ly / 2 : ly; }
    int local_lz() const { return lz / 2; }
    int local_lt() const { return lt / 2; }

    std::int64_t v4() const { return std::int64_t{1} * lx * ly * lz * lt; }
    std::int64_t local_v4() const {
        return std::int64_t{1} * local_lx() * local_ly() * local_lz() * local_lt();
    }
    std::int64_t lups() const { return v4() * ls; }

    void validate() const;

    struct Coord {
        int x = 0, y = 0, z = 0, t = 0;
    };

    /// Global lexicographic site index, x fastest.
    std::int64_t site_index(const Coord& c) const;
    Coord site_coord(std::int64_t site) const;
    Coord neighbor(const Coord& c, int dir) const; // dir: 0 x+, 1 x-, ... 7 t-

    /// Decomposition into (collapsed local site, SIMD lane).
    std::int64_t local_index(const Coord& c) const;
    int lane(const Coord& c) const;
};

/// Directions in storage order: x+, x-, y+, y-, z+, z-, t+, t-.
constexpr int kDwDirections = 8;

using cplx = std::complex<double>;

/// 4-spinor x 3-color complex field over V4 x Ls (192 bytes per site and s).
/// Data lives in the geometry's vector layout; accessors take logical
/// indices.
class FermionField {
public:
    explicit FermionField(const LatticeGeometry& geom);

    const LatticeGeometry& geom() const { return geom_; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    cplx get(std::int64_t site, int s, int alpha, int a) const;
    void set(std::int64_t site, int s, int alpha, int a, cplx v);

    /// Byte offset of the (local site, s) vector element and its size; used
    /// for trace generation.
    std::int64_t element_bytes() const { return 12 * geom_.vl_sites() * 16; }

    static FermionField random(const LatticeGeometry& geom, std::uint64_t seed);
    static FermionField zeros(const LatticeGeometry& geom) { return FermionField(geom); }

    /// Logical real vector of length 24 * V4 * Ls (site-major, s, spinor,
    /// color, re/im), independent of the storage layout.
    std::vector<double> to_vector() const;
    static FermionField from_vector(const LatticeGeometry& geom,
                                    const std::vector<double>& v);

private:
    LatticeGeometry geom_;
    std::vector<double> data_;
    std::int64_t dof_index(std::int64_t site, int s, int c) const; // base double index
};

/// 3x3 complex matrices for the eight stencil directions; entry (dir, site)
/// holds the coefficient applied at `site` for that direction, i.e. the
/// backward slots store the already shifted, daggered links.
class GaugeField {
public:
    explicit GaugeField(const LatticeGeometry& geom);

    const LatticeGeometry& geom() const { return geom_; }

    cplx get(int dir, std::int64_t site, int row, int col) const;
    void set(int dir, std::int64_t site, int row, int col, cplx v);

    std::int64_t element_bytes() const { return 9 * geom_.vl_sites() * 16; }

    /// Random 4-direction link fields with the backward slots filled as
    /// U_mu(n - mu)^dagger, i.e. a physically consistent operator.
    static GaugeField random_links(const LatticeGeometry& geom, std::uint64_t seed);
    static GaugeField unit_links(const LatticeGeometry& geom);
    static GaugeField zeros(const LatticeGeometry& geom) { return GaugeField(geom); }

private:
    LatticeGeometry geom_;
    std::vector<double> data_;
    std::int64_t dof_index(int dir, std::int64_t site, int c) const;
};

/// Chiral gamma matrices as permutation/phase lookup tables:
/// (gamma_mu v)_alpha = gamma_phase[mu][alpha] * v[gamma_perm[mu][alpha]].
extern const int gamma_perm[4][4];
extern const cplx gamma_phase[4][4];

} // namespace ecmkit
