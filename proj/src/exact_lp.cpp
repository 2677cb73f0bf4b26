#include "qgrade/exact_lp.hpp"

namespace qgrade {

std::optional<std::vector<Rational>> find_nonnegative_solution(const RationalMatrix &m, const RationalVector &b)
{
    const std::size_t rows = m.rows();
    const std::size_t n = m.cols();
    if (b.dim() != rows) throw PreconditionError("right-hand side does not match the constraint matrix");
    if (rows == 0) return std::vector<Rational>(n);

    // Columns: n structural, rows artificial, then the right-hand side.
    const std::size_t width = n + rows + 1;
    std::vector<std::vector<Rational>> tab(rows, std::vector<Rational>(width));
    std::vector<std::size_t> basic(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const bool flip = b[r] < 0;
        for (std::size_t c = 0; c < n; ++c) tab[r][c] = flip ? Rational(-m(r, c)) : m(r, c);
        tab[r][n + r] = 1;
        tab[r][width - 1] = flip ? Rational(-b[r]) : b[r];
        basic[r] = n + r;
    }
    // Reduced costs of the phase-one objective (sum of artificials).
    std::vector<Rational> cost(width);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < width; ++c)
            if (c < n || c == width - 1) cost[c] -= tab[r][c];

    for (;;) {
        std::size_t enter = width;
        for (std::size_t c = 0; c + 1 < width; ++c) {
            if (cost[c] < 0) {
                enter = c;
                break;
            }
        }
        if (enter == width) break;

        std::size_t leave = rows;
        Rational best;
        for (std::size_t r = 0; r < rows; ++r) {
            if (tab[r][enter] <= 0) continue;
            Rational ratio = tab[r][width - 1] / tab[r][enter];
            if (leave == rows || ratio < best || (ratio == best && basic[r] < basic[leave])) {
                leave = r;
                best = ratio;
            }
        }
        // Phase one is bounded below by zero, so some row always qualifies.
        if (leave == rows) break;

        Rational piv = tab[leave][enter];
        for (auto &x : tab[leave]) x /= piv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == leave || tab[r][enter] == 0) continue;
            Rational f = tab[r][enter];
            for (std::size_t c = 0; c < width; ++c) tab[r][c] -= f * tab[leave][c];
        }
        if (cost[enter] != 0) {
            Rational f = cost[enter];
            for (std::size_t c = 0; c < width; ++c) cost[c] -= f * tab[leave][c];
        }
        basic[leave] = enter;
    }

    if (cost[width - 1] != 0) return std::nullopt;
    std::vector<Rational> x(n);
    for (std::size_t r = 0; r < rows; ++r)
        if (basic[r] < n) x[basic[r]] = tab[r][width - 1];
    return x;
}

} // namespace qgrade
