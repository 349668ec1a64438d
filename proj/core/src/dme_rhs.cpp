#include "squeezent/dme.hpp"

#include <vector>

namespace squeezent::dme::detail {

// The generator splits over the 16 (sector, sector) tiles of the density
// matrix. Within a tile everything is a banded stencil:
//
//   out = A_s B + B A_t† + w_st B
//       + rate_down L_s B L_t† + rate_up M_s B M_t†   (+ scalar tile swaps)
//
// with A_s tridiagonal, L_s = b - shift_s upper-bidiagonal and
// M_s = b† - shift_s lower-bidiagonal. Expanding the products gives a
// 7-point stencil whose coefficients factor into per-row and per-column
// parts (precomputed in BlockGen::pairs), so a tile update is three
// contiguous row passes.
//
// In the rotating frame the free -i n diagonal vanishes and every leg that
// shifts the row/column offset by +-1 picks up exp(-+ i t); the diagonal
// and corner legs (offset-preserving) stay phase-free, as do the tile
// swaps. The generator maps Hermitian to Hermitian, so only tiles with
// s <= t are computed and the lower ones are conjugate-mirrored.
void block_rhs(const BlockGen& gen, const cplx* rho, cplx* out, double t, bool rotating) {
    const std::size_t n = gen.n_f;
    const std::size_t dim = 4 * n;
    static thread_local std::vector<cplx> zero_row;
    if (zero_row.size() < n) zero_row.assign(n, cplx(0.0, 0.0));

    const cplx ph_m = rotating ? std::polar(1.0, -t) : cplx(1.0, 0.0);
    const cplx ph_p = std::conj(ph_m);
    const double* sq = gen.sq.data();

    for (int s = 0; s < 4; ++s) {
        for (int tt = s; tt < 4; ++tt) {
            const cplx* in_base = rho + (std::size_t(s) * n) * dim + std::size_t(tt) * n;
            cplx* out_base = out + (std::size_t(s) * n) * dim + std::size_t(tt) * n;

            const auto& pt = gen.pairs[s * 4 + tt];
            const cplx* col_diag = (rotating ? pt.col_diag_rot : pt.col_diag_lab).data();
            const cplx* col_right = pt.col_right.data();
            const cplx* col_left = pt.col_left.data();
            const cplx* adg_s = (rotating ? gen.a_diag_rot[s] : gen.a_diag[s]).data();

            for (std::size_t m = 0; m < n; ++m) {
                const cplx* row = in_base + m * dim;
                const cplx* rdn = (m + 1 < n) ? in_base + (m + 1) * dim : zero_row.data();
                const cplx* rup = (m > 0) ? in_base + (m - 1) * dim : zero_row.data();
                cplx* orow = out_base + m * dim;

                const cplx dm = adg_s[m];
                const cplx c_dn = pt.row_dn[m];  // zero at m = n-1
                const cplx c_up = pt.row_up[m];  // zero at m = 0
                const double f_dn = (m + 1 < n) ? gen.rate_down * sq[m + 1] : 0.0;
                const double f_up = (m > 0) ? gen.rate_up * sq[m] : 0.0;

                {  // k = 0: no col_left / row_up-corner legs
                    cplx a0 = row[0] * (dm + col_diag[0]) + rdn[1] * (f_dn * sq[1]);
                    const cplx am = rdn[0] * c_dn;
                    const cplx ap = rup[0] * c_up + row[1] * col_right[0];
                    orow[0] = a0 + ph_m * am + ph_p * ap;
                }
                for (std::size_t k = 1; k + 1 < n; ++k) {
                    cplx a0 = row[k] * (dm + col_diag[k]);
                    a0 += rdn[k + 1] * (f_dn * sq[k + 1]);
                    a0 += rup[k - 1] * (f_up * sq[k]);
                    const cplx am = rdn[k] * c_dn + row[k - 1] * col_left[k];
                    const cplx ap = rup[k] * c_up + row[k + 1] * col_right[k];
                    orow[k] = a0 + ph_m * am + ph_p * ap;
                }
                {  // k = n-1: no col_right / row_dn-corner legs
                    const std::size_t k = n - 1;
                    cplx a0 = row[k] * (dm + col_diag[k]) + rup[k - 1] * (f_up * sq[k]);
                    const cplx am = rdn[k] * c_dn + row[k - 1] * col_left[k];
                    const cplx ap = rup[k] * c_up;
                    orow[k] = a0 + ph_m * am + ph_p * ap;
                }
            }
        }
    }

    // Scalar tile couplings (upper-tile targets only; mirroring covers the
    // rest): cavity decay feeds photon tiles (.,1)->(.,0), qubit relaxation
    // feeds (0,.)->(1,.), excitation the reverse.
    auto add_tile = [&](int s_dst, int t_dst, int s_src, int t_src, double rate) {
        if (rate == 0.0 || s_dst > t_dst) return;
        cplx* dst = out + (std::size_t(s_dst) * n) * dim + std::size_t(t_dst) * n;
        const cplx* src = rho + (std::size_t(s_src) * n) * dim + std::size_t(t_src) * n;
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t k = 0; k < n; ++k) dst[m * dim + k] += rate * src[m * dim + k];
    };
    for (int q = 0; q < 2; ++q)
        for (int q2 = 0; q2 < 2; ++q2)
            add_tile(q * 2 + 0, q2 * 2 + 0, q * 2 + 1, q2 * 2 + 1, gen.kappa);
    for (int c = 0; c < 2; ++c)
        for (int c2 = 0; c2 < 2; ++c2) {
            add_tile(2 + c, 2 + c2, c, c2, gen.rate_minus);  // sigma- sandwich
            add_tile(c, c2, 2 + c, 2 + c2, gen.rate_plus);   // sigma+ sandwich
        }

    // conjugate-mirror the lower tiles
    for (int s = 0; s < 4; ++s)
        for (int tt = s + 1; tt < 4; ++tt) {
            const cplx* up = out + (std::size_t(s) * n) * dim + std::size_t(tt) * n;
            cplx* lo = out + (std::size_t(tt) * n) * dim + std::size_t(s) * n;
            for (std::size_t m = 0; m < n; ++m)
                for (std::size_t k = 0; k < n; ++k)
                    lo[k * dim + m] = std::conj(up[m * dim + k]);
        }
}

}  // namespace squeezent::dme::detail
