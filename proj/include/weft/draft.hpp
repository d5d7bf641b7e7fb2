#pragma once

#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace weft {

// A loom with 16 shafts and treadles realizes every draft we accept.
inline constexpr int kMaxDraftSize = 16;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidSpec : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidDraft : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binary interlacing matrix over one repeat unit. Entry 1 means the warp
// passes over the weft at that crossing; row 0 is the topmost weft.
struct WeavingDraft {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> cells;  // row-major, rows*cols entries

    WeavingDraft() = default;
    WeavingDraft(int r, int c) : rows(r), cols(c), cells(static_cast<size_t>(r) * c, 0) {}

    std::uint8_t at(int i, int j) const { return cells[static_cast<size_t>(i) * cols + j]; }
    std::uint8_t& at(int i, int j) { return cells[static_cast<size_t>(i) * cols + j]; }

    // Periodic access; i, j may be any integers.
    std::uint8_t wrap_at(int i, int j) const {
        const int wi = ((i % rows) + rows) % rows;
        const int wj = ((j % cols) + cols) % cols;
        return at(wi, wj);
    }

    bool operator==(const WeavingDraft& o) const = default;
};

enum class WeaveFamily { plain, twill, satin, basket, herringbone };

inline const char* family_name(WeaveFamily f) {
    switch (f) {
        case WeaveFamily::plain: return "plain";
        case WeaveFamily::twill: return "twill";
        case WeaveFamily::satin: return "satin";
        case WeaveFamily::basket: return "basket";
        case WeaveFamily::herringbone: return "herringbone";
    }
    return "?";
}

struct PatternSpec {
    WeaveFamily family = WeaveFamily::plain;
    int twill_over = 2;         // m: cells the warp floats over
    int twill_under = 2;        // n: cells it passes under
    int satin_size = 5;         // n: repeat size, one riser per row
    int satin_counter = 2;      // c: riser step, 1 < c < n-1, gcd(c, n) = 1
    int basket_block = 2;       // k: block size of the checker
    int herringbone_width = 4;  // w: band width before the diagonal reverses
    int repeat_rows = 0;        // 0 = natural period; otherwise a multiple of it
    int repeat_cols = 0;
};

enum class ViolationKind { oversize, floating_row, floating_column };

struct Violation {
    ViolationKind kind;
    int index;  // row/column index, -1 for oversize
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }

    std::string to_string() const {
        std::string out;
        for (const auto& v : violations) {
            out += v.message;
            out += '\n';
        }
        return out;
    }
};

inline ValidationReport validate_draft(const WeavingDraft& d) {
    ValidationReport report;
    if (d.rows < 1 || d.cols < 1 || d.rows > kMaxDraftSize || d.cols > kMaxDraftSize) {
        report.violations.push_back(
            {ViolationKind::oversize, -1,
             "draft is " + std::to_string(d.rows) + "x" + std::to_string(d.cols) +
                 "; the supported range is 1x1 through " + std::to_string(kMaxDraftSize) + "x" +
                 std::to_string(kMaxDraftSize)});
        return report;
    }
    for (int i = 0; i < d.rows; ++i) {
        bool any0 = false, any1 = false;
        for (int j = 0; j < d.cols; ++j) (d.at(i, j) ? any1 : any0) = true;
        if (!any0 || !any1) {
            report.violations.push_back(
                {ViolationKind::floating_row, i,
                 "row " + std::to_string(i) + " floats: the weft never interlaces"});
        }
    }
    for (int j = 0; j < d.cols; ++j) {
        bool any0 = false, any1 = false;
        for (int i = 0; i < d.rows; ++i) (d.at(i, j) ? any1 : any0) = true;
        if (!any0 || !any1) {
            report.violations.push_back(
                {ViolationKind::floating_column, j,
                 "column " + std::to_string(j) + " floats: the warp never interlaces"});
        }
    }
    return report;
}

namespace detail {

inline int positive_mod(int a, int m) { return ((a % m) + m) % m; }

inline WeavingDraft tile_draft(const WeavingDraft& base, int rows, int cols) {
    if (rows == 0) rows = base.rows;
    if (cols == 0) cols = base.cols;
    if (rows % base.rows != 0 || cols % base.cols != 0)
        throw InvalidSpec("repeat dimensions must be multiples of the pattern period " +
                          std::to_string(base.rows) + "x" + std::to_string(base.cols));
    if (rows > kMaxDraftSize || cols > kMaxDraftSize)
        throw InvalidSpec("repeat exceeds " + std::to_string(kMaxDraftSize) + "x" +
                          std::to_string(kMaxDraftSize));
    WeavingDraft d(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) d.at(i, j) = base.at(i % base.rows, j % base.cols);
    return d;
}

}  // namespace detail

inline WeavingDraft generate_pattern(const PatternSpec& spec) {
    WeavingDraft base;
    switch (spec.family) {
        case WeaveFamily::plain: {
            base = WeavingDraft(2, 2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) base.at(i, j) = ((i + j) % 2 == 0) ? 1 : 0;
            break;
        }
        case WeaveFamily::twill: {
            const int m = spec.twill_over, n = spec.twill_under;
            if (m < 1 || n < 1) throw InvalidSpec("twill requires m >= 1 and n >= 1");
            const int p = m + n;
            if (p > kMaxDraftSize) throw InvalidSpec("twill period m+n exceeds 16");
            base = WeavingDraft(p, p);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j)
                    base.at(i, j) = (detail::positive_mod(j - i, p) < m) ? 1 : 0;
            break;
        }
        case WeaveFamily::satin: {
            const int n = spec.satin_size, c = spec.satin_counter;
            if (n < 4) throw InvalidSpec("satin requires size n >= 4");
            if (n > kMaxDraftSize) throw InvalidSpec("satin size exceeds 16");
            if (!(1 < c && c < n - 1)) throw InvalidSpec("satin counter must satisfy 1 < c < n-1");
            if (std::gcd(c, n) != 1) throw InvalidSpec("satin counter must be coprime with n");
            base = WeavingDraft(n, n);
            for (int i = 0; i < n; ++i) base.at(i, (i * c) % n) = 1;
            break;
        }
        case WeaveFamily::basket: {
            const int k = spec.basket_block;
            if (k < 1) throw InvalidSpec("basket requires block size k >= 1");
            if (2 * k > kMaxDraftSize) throw InvalidSpec("basket period 2k exceeds 16");
            base = WeavingDraft(2 * k, 2 * k);
            for (int i = 0; i < 2 * k; ++i)
                for (int j = 0; j < 2 * k; ++j) base.at(i, j) = ((i / k + j / k) % 2 == 0) ? 1 : 0;
            break;
        }
        case WeaveFamily::herringbone: {
            const int m = spec.twill_over, n = spec.twill_under, w = spec.herringbone_width;
            if (m < 1 || n < 1) throw InvalidSpec("herringbone requires m >= 1 and n >= 1");
            if (w < 2) throw InvalidSpec("herringbone requires band width w >= 2");
            const int p = m + n;
            if (p > kMaxDraftSize || 2 * w > kMaxDraftSize)
                throw InvalidSpec("herringbone period exceeds 16");
            // A band narrower than the longer float would leave a row that never
            // interlaces once the diagonal reverses.
            if (2 * w <= std::max(m, n))
                throw InvalidSpec("herringbone band too narrow for the twill floats: need 2w > max(m, n)");
            base = WeavingDraft(p, 2 * w);
            for (int i = 0; i < p; ++i) {
                for (int j = 0; j < 2 * w; ++j) {
                    const int band = j / w;
                    const int jj = (band % 2 == 0) ? j : (band * w + w - 1 - (j % w));
                    base.at(i, j) = (detail::positive_mod(jj - i, p) < m) ? 1 : 0;
                }
            }
            break;
        }
    }
    WeavingDraft d = detail::tile_draft(base, spec.repeat_rows, spec.repeat_cols);
    const auto report = validate_draft(d);
    if (!report.valid()) throw InvalidSpec("generated draft is invalid: " + report.to_string());
    return d;
}

// Accepts rows of whitespace-separated 0/1 tokens or packed strings ("1 0" or
// "10"); '#' starts a comment that runs to the end of the line.
inline WeavingDraft parse_draft(std::string_view text) {
    std::vector<std::vector<std::uint8_t>> grid;
    std::istringstream stream{std::string(text)};
    std::string line;
    while (std::getline(stream, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream tokens(line);
        std::string tok;
        std::vector<std::uint8_t> row;
        while (tokens >> tok) {
            for (char ch : tok) {
                if (ch != '0' && ch != '1')
                    throw ParseError("invalid token '" + tok + "': drafts are binary");
                row.push_back(ch == '1' ? 1 : 0);
            }
        }
        if (!row.empty()) grid.push_back(std::move(row));
    }
    if (grid.empty()) throw ParseError("empty draft");
    const size_t cols = grid.front().size();
    for (size_t i = 0; i < grid.size(); ++i)
        if (grid[i].size() != cols)
            throw ParseError("ragged draft: row " + std::to_string(i) + " has " +
                             std::to_string(grid[i].size()) + " cells, expected " +
                             std::to_string(cols));
    if (grid.size() > kMaxDraftSize || cols > static_cast<size_t>(kMaxDraftSize))
        throw SizeError("draft exceeds " + std::to_string(kMaxDraftSize) + "x" +
                        std::to_string(kMaxDraftSize));
    WeavingDraft d(static_cast<int>(grid.size()), static_cast<int>(cols));
    for (int i = 0; i < d.rows; ++i)
        for (int j = 0; j < d.cols; ++j) d.at(i, j) = grid[i][j];
    return d;
}

inline std::string serialize_draft(const WeavingDraft& d, bool with_header = true) {
    std::string out;
    if (with_header)
        out += "# weaving draft " + std::to_string(d.rows) + "x" + std::to_string(d.cols) + "\n";
    for (int i = 0; i < d.rows; ++i) {
        for (int j = 0; j < d.cols; ++j) {
            if (j) out += ' ';
            out += d.at(i, j) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

enum class YarnKind : std::uint8_t { weft = 0, warp = 1 };

// Per-cell view of the yarn visible on top and the run (float) it belongs to.
// Runs wrap across the repeat boundary so that the baked maps tile.
struct CellSegment {
    YarnKind kind;
    int run_start;   // index along the run direction of the first run cell
    int run_length;  // cells the yarn stays visible, >= 1
    int run_pos;     // index of this cell within its run
};

struct SegmentLayout {
    int rows = 0;
    int cols = 0;
    std::vector<CellSegment> cells;

    const CellSegment& at(int i, int j) const { return cells[static_cast<size_t>(i) * cols + j]; }
    CellSegment& at(int i, int j) { return cells[static_cast<size_t>(i) * cols + j]; }
};

namespace detail {

// Runs where the predicate value holds along one column (warp direction) or
// one row (weft direction), with periodic wrap.
inline CellSegment run_info(const WeavingDraft& d, int i, int j, bool along_column,
                            std::uint8_t match) {
    const int len = along_column ? d.rows : d.cols;
    auto value = [&](int k) {
        return along_column ? d.at(positive_mod(k, len), j) : d.at(i, positive_mod(k, len));
    };
    const int here = along_column ? i : j;
    int back = 0;
    while (back < len && value(here - back - 1) == match) ++back;
    int fwd = 0;
    while (fwd < len && value(here + fwd + 1) == match) ++fwd;
    CellSegment seg;
    seg.kind = along_column ? YarnKind::warp : YarnKind::weft;
    seg.run_length = std::min(back + fwd + 1, len);
    seg.run_start = positive_mod(here - back, len);
    seg.run_pos = back;
    return seg;
}

// match_visible = true lays out the yarns on top (the drawdown); false lays
// out the runs of the yarn hidden beneath each cell.
inline SegmentLayout extract_layout(const WeavingDraft& d, bool match_visible) {
    const auto report = validate_draft(d);
    if (!report.valid()) throw InvalidDraft("cannot segment an invalid draft: " + report.to_string());
    SegmentLayout layout;
    layout.rows = d.rows;
    layout.cols = d.cols;
    layout.cells.resize(static_cast<size_t>(d.rows) * d.cols);
    for (int i = 0; i < d.rows; ++i) {
        for (int j = 0; j < d.cols; ++j) {
            const bool warp_on_top = d.at(i, j) != 0;
            const bool warp_yarn = (warp_on_top == match_visible);
            // A warp stays visible on 1-cells of its column; a weft on 0-cells
            // of its row. The hidden yarn runs where the opposite holds.
            const std::uint8_t match = match_visible ? (warp_yarn ? 1 : 0) : (warp_yarn ? 0 : 1);
            layout.at(i, j) = run_info(d, i, j, warp_yarn, match);
        }
    }
    return layout;
}

}  // namespace detail

inline SegmentLayout extract_segments(const WeavingDraft& d) {
    return detail::extract_layout(d, /*match_visible=*/true);
}

// Layout of the yarns passing underneath; used when sliding exposes them.
inline SegmentLayout extract_hidden_segments(const WeavingDraft& d) {
    return detail::extract_layout(d, /*match_visible=*/false);
}

}  // namespace weft
