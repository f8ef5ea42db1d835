#include "h4/specseq.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "h4/errors.hpp"

namespace h4 {

using nlohmann::json;

namespace {
const PageCell kTrivialCell{AbelianGroup::trivial(), "asserted-zero", false};

AbelianGroup group_from_json(const json& g) {
    if (g.is_string()) {
        std::string s = g.get<std::string>();
        if (s == "Z") return AbelianGroup::from_orders({0});
        if (s == "1") return AbelianGroup::trivial();
        throw ValidationError("page cell group must be \"Z\", \"1\", \"unknown\" or a factor list");
    }
    std::vector<long long> orders;
    for (const auto& v : g) orders.push_back(v.get<long long>());
    return AbelianGroup::from_orders(orders);
}
}  // namespace

Page Page::assemble(const std::vector<Entry>& entries, int page_number, bool fiber_h1_trivial) {
    Page p;
    p.page_number_ = page_number;
    for (const Entry& e : entries) {
        if (e.i < 0 || e.j < 0 || e.i + e.j > kMaxTotal)
            throw ValidationError("page cell (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                                  ") is outside the total-degree-5 range");
        if ((e.cell.unknown || !e.cell.group.is_trivial()) && e.cell.provenance.empty())
            throw ValidationError("page cell (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                                  ") needs provenance");
        if (fiber_h1_trivial && e.j == 1 && (e.cell.unknown || !e.cell.group.is_trivial()))
            throw ValidationError("cells in row j = 1 must vanish when the fiber has trivial H^1");
        if (p.cells_.count({e.i, e.j}))
            throw ValidationError("duplicate page cell (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ")");
        p.cells_[{e.i, e.j}] = e.cell;
    }
    return p;
}

Page Page::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open page file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_json_text(ss.str());
}

Page Page::load_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("page file is not valid JSON: ") + e.what());
    }
    std::vector<Entry> entries;
    for (const auto& c : doc.at("cells")) {
        Entry e;
        e.i = c.at("i").get<int>();
        e.j = c.at("j").get<int>();
        e.cell.provenance = c.value("provenance", "");
        if (c.at("group").is_string() && c.at("group").get<std::string>() == "unknown") {
            e.cell.unknown = true;
        } else {
            e.cell.group = group_from_json(c.at("group"));
        }
        entries.push_back(e);
    }
    Page p = assemble(entries, doc.value("page", 2), doc.value("fiber_h1_trivial", true));
    p.name_ = doc.value("name", "");
    if (doc.contains("differentials")) {
        for (const auto& d : doc["differentials"]) {
            FileDifferential fd;
            fd.r = d.value("r", p.page_number_);
            fd.i = d.at("source").at(0).get<int>();
            fd.j = d.at("source").at(1).get<int>();
            fd.kind = d.at("kind").get<std::string>();
            fd.k = d.value("k", 0LL);
            if (d.contains("matrix")) {
                fd.matrix_rows = d.at("rows").get<int>();
                fd.matrix_cols = d.at("cols").get<int>();
                for (const auto& t : d["matrix"])
                    fd.matrix.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<long long>()});
            }
            p.file_diffs_.push_back(fd);
        }
    }
    return p;
}

const PageCell& Page::cell(int i, int j) const {
    auto it = cells_.find({i, j});
    return it == cells_.end() ? kTrivialCell : it->second;
}

bool Page::is_zero(int i, int j) const {
    if (i < 0 || j < 0) return true;  // outside the first quadrant
    const PageCell& c = cell(i, j);
    return !c.unknown && c.group.is_trivial();
}

std::vector<Page::Entry> Page::nonzero_cells() const {
    std::vector<Entry> out;
    for (const auto& [key, cell] : cells_)
        if (cell.unknown || !cell.group.is_trivial()) out.push_back({key.first, key.second, cell});
    return out;
}

DifferentialSpec DifferentialSpec::zero(int r, int i, int j) {
    return DifferentialSpec{r, i, j, Kind::Zero, 0, {}};
}
DifferentialSpec DifferentialSpec::injective(int r, int i, int j) {
    return DifferentialSpec{r, i, j, Kind::Injective, 0, {}};
}
DifferentialSpec DifferentialSpec::mult(int r, int i, int j, long long k) {
    return DifferentialSpec{r, i, j, Kind::MultiplicationBy, k, {}};
}
DifferentialSpec DifferentialSpec::matrix(int r, int i, int j, IntMat m) {
    return DifferentialSpec{r, i, j, Kind::Matrix, 0, std::move(m)};
}

namespace {

struct HomResult {
    AbelianGroup kernel;
    AbelianGroup cokernel;
};

// kernel and cokernel of a matrix-presented homomorphism between finite
// abelian groups in invariant-factor coordinates
HomResult finite_hom_kernel_cokernel(const AbelianGroup& S, const AbelianGroup& T, const IntMat& M) {
    if (!S.is_finite() || !T.is_finite())
        throw ValidationError("differential endpoints must be finite groups");
    int s = static_cast<int>(S.invariant_factors().size());
    int t = static_cast<int>(T.invariant_factors().size());
    if (M.cols() != s || M.rows() != t)
        throw ValidationError("differential matrix shape does not match the cell presentations");
    std::vector<long long> d = S.invariant_factors(), e = T.invariant_factors();
    // well-definedness: M(d_i e_i) = 0 in T
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < t; ++j)
            if ((BigInt(M.at(j, i)) * BigInt(d[i]) % BigInt(e[j])) != BigInt(0))
                throw ValidationError("differential map is inconsistent with the cell orders");

    // cokernel = Z^t / (im M + diag(e))
    IntMat stacked(t, s + t);
    for (int j = 0; j < t; ++j) {
        for (const auto& [i, v] : M.row(j)) stacked.set(j, i, v);
        stacked.set(j, s + j, BigInt(e[j]));
    }
    AbelianGroup coker = cokernel_group(stacked);

    // kernel lattice of Z^s -> T, then mod out diag(d)
    IntMat kb = kernel_basis(stacked);
    // project onto the first s coordinates
    IntMat L(s, kb.cols());
    for (int c = 0; c < kb.cols(); ++c)
        for (int i = 0; i < s; ++i)
            if (!kb.at(i, c).is_zero()) L.set(i, c, kb.at(i, c));
    // basis of the projected lattice via SNF: columns d_i * (U^{-1} e_i)
    SnfResult snf = smith_normal_form(L, SNF_U | SNF_UINV);
    IntMat B(s, snf.rank);
    for (int c = 0; c < snf.rank; ++c)
        for (int i = 0; i < s; ++i) {
            BigInt v = snf.Uinv->at(i, c) * snf.invariant_factors[c];
            if (!v.is_zero()) B.set(i, c, v);
        }
    // diag(d) Z^s is inside the kernel lattice; express and divide out
    IntMat D(s, s);
    for (int i = 0; i < s; ++i) D.set(i, i, BigInt(d[i]));
    IntMat W;
    if (!solve_int(B, D, W)) throw InternalError("finite_hom_kernel_cokernel: relation lattice escape");
    HomResult out;
    out.kernel = cokernel_group(W);
    out.cokernel = coker;
    return out;
}

}  // namespace

Page turn_page(const Page& p, const std::vector<DifferentialSpec>& diffs) {
    Page out = p;
    out.page_number_ = p.page_number() + 1;
    for (const DifferentialSpec& d : diffs) {
        if (d.r != p.page_number())
            throw ValidationError("differential page number " + std::to_string(d.r) +
                                  " does not match the page " + std::to_string(p.page_number()));
        int ti = d.source_i + d.r, tj = d.source_j - d.r + 1;
        if (tj < 0) throw ValidationError("differential target leaves the first quadrant");
        const PageCell& src = p.cell(d.source_i, d.source_j);
        const PageCell& tgt = p.cell(ti, tj);
        if (src.unknown || tgt.unknown)
            throw ValidationError("differential touches an unknown cell");
        if (!src.group.is_finite() && d.kind != DifferentialSpec::Kind::Zero)
            throw ValidationError("free cell differentials are not supported");

        AbelianGroup new_src = src.group, new_tgt = tgt.group;
        switch (d.kind) {
            case DifferentialSpec::Kind::Zero:
                break;
            case DifferentialSpec::Kind::Injective: {
                if (src.group.is_trivial()) break;
                BigInt so = src.group.order();
                if (tgt.group.is_finite() && tgt.group.order() == so) {
                    new_tgt = AbelianGroup::trivial();
                } else if (tgt.group.is_cyclic() && tgt.group.is_finite() &&
                           (tgt.group.order() % so).is_zero()) {
                    new_tgt = AbelianGroup::cyclic((tgt.group.order() / so).to_int64());
                } else {
                    throw ValidationError(
                        "injective differential: quotient by the stated image order is ambiguous here");
                }
                new_src = AbelianGroup::trivial();
                break;
            }
            case DifferentialSpec::Kind::MultiplicationBy: {
                if (!src.group.is_cyclic() || !tgt.group.is_cyclic() || !src.group.is_finite() ||
                    !tgt.group.is_finite())
                    throw ValidationError("multiplication-by differentials need finite cyclic endpoints");
                long long a = src.group.is_trivial() ? 1 : src.group.invariant_factors()[0];
                long long b = tgt.group.is_trivial() ? 1 : tgt.group.invariant_factors()[0];
                long long k = ((d.k % b) + b) % b;
                if ((BigInt(k) * BigInt(a) % BigInt(b)) != BigInt(0))
                    throw ValidationError("multiplication differential is not well defined on Z/" +
                                          std::to_string(a));
                long long g = std::gcd(k, b);
                long long image = b / g;
                new_src = AbelianGroup::cyclic(a / image);
                new_tgt = AbelianGroup::cyclic(g);
                break;
            }
            case DifferentialSpec::Kind::Matrix: {
                HomResult hr = finite_hom_kernel_cokernel(src.group, tgt.group, d.map);
                new_src = hr.kernel;
                new_tgt = hr.cokernel;
                break;
            }
        }
        // subquotient property: orders never grow
        if (src.group.is_finite() &&
            !(src.group.order() % new_src.order()).is_zero())
            throw InternalError("turn_page: source cell grew");
        if (tgt.group.is_finite() && !(tgt.group.order() % new_tgt.order()).is_zero())
            throw InternalError("turn_page: target cell grew");

        PageCell sc = src, tc = tgt;
        sc.group = new_src;
        tc.group = new_tgt;
        if (sc.provenance.empty()) sc.provenance = "turned";
        if (tc.provenance.empty()) tc.provenance = "turned";
        sc.provenance += " | d" + std::to_string(d.r);
        tc.provenance += " | d" + std::to_string(d.r);
        out.cells_[{d.source_i, d.source_j}] = sc;
        out.cells_[{ti, tj}] = tc;
    }
    return out;
}

BigInt degree4_order_bound(const Page& p) {
    BigInt bound(1);
    for (int i = 0; i <= 4; ++i) {
        const PageCell& c = p.cell(i, 4 - i);
        if (c.unknown)
            throw ValidationError("degree4_order_bound: cell (" + std::to_string(i) + "," +
                                  std::to_string(4 - i) + ") is unknown");
        if (!c.group.is_finite())
            throw ValidationError("degree4_order_bound: free cell in total degree 4");
        bound *= c.group.order();
    }
    return bound;
}

Degree4Interval degree4_interval(const Page& p) {
    Degree4Interval out;
    out.upper = degree4_order_bound(p);
    out.lower = BigInt(1);
    for (int i = 0; i <= 4; ++i) {
        int j = 4 - i;
        const PageCell& c = p.cell(i, j);
        if (c.group.is_trivial()) continue;
        // survival certification scans every page from r = 2 up: a
        // differential from an earlier page that was never resolved (for
        // example into an unknown cell) still disqualifies the lower bound
        bool untouchable = true;
        for (int r = 2; r <= Page::kMaxTotal + 1 && untouchable; ++r) {
            // outgoing d_r: (i, j) -> (i + r, j - r + 1)
            if (j - r + 1 >= 0 && !p.is_zero(i + r, j - r + 1)) untouchable = false;
            // incoming d_r: (i - r, j + r - 1) -> (i, j)
            if (i - r >= 0 && !p.is_zero(i - r, j + r - 1)) untouchable = false;
        }
        if (untouchable) out.lower *= c.group.order();
    }
    out.exact = out.lower == out.upper;
    return out;
}

Page schur_cover_page(long long p, long long n, long long N, const std::optional<AbelianGroup>& h4) {
    if (n < 2 || N % n != 0) throw ValidationError("schur_cover_page: need n | N, n > 1");
    std::vector<Page::Entry> entries;
    auto add = [&](int i, int j, AbelianGroup g, const std::string& why) {
        entries.push_back({i, j, PageCell{std::move(g), why, false}});
    };
    add(0, 0, AbelianGroup::from_orders({0}), "H^0");
    add(0, 2, AbelianGroup::cyclic(n), "(Z/n) y");
    add(0, 4, AbelianGroup::cyclic(n), "(Z/n) y^2");
    add(2, 2, AbelianGroup::cyclic(n), "H^2(G; Z/n)");
    add(3, 2, AbelianGroup::cyclic(n), "submodule (Z/n) xy of H^3(G; Z/n)");
    add(3, 0, AbelianGroup::cyclic(N), "H^3(G)_(p) cyclic of order N");
    if (h4) {
        add(4, 0, *h4, "H^4(G)_(p)");
    } else {
        entries.push_back({4, 0, PageCell{AbelianGroup::trivial(), "H^4(G)_(p) undetermined", true}});
    }
    entries.push_back({5, 0, PageCell{AbelianGroup::trivial(), "H^5(G)_(p) undetermined", true}});
    (void)p;
    return Page::assemble(entries, 3 /* d2 vanishes for degree reasons: E3 = E2 */);
}

std::vector<DifferentialSpec> schur_cover_d3(long long n, long long N) {
    // d3(y) = (N/n) x is an inclusion Z/n -> Z/N; the Leibniz rule gives
    // d3(y^2) = 2 y d3(y) = (2N/n) xy in the (Z/n) xy submodule
    std::vector<DifferentialSpec> ds;
    ds.push_back(DifferentialSpec::mult(3, 0, 2, N / n));
    ds.push_back(DifferentialSpec::mult(3, 0, 4, 2 * (N / n)));
    return ds;
}

CoverBound cover_cokernel_bound(long long p, const AbelianGroup& h2_part, long long cover_n) {
    if (!h2_part.is_cyclic() || h2_part.is_trivial())
        throw ValidationError("cover_cokernel_bound: H_2(G)_(p) must be nontrivial cyclic");
    long long N = h2_part.order().to_int64();
    CoverBound out;
    out.p = p;
    out.n = cover_n;
    out.N = N;
    if (p % 2) {
        if (cover_n != p || N != p)
            throw ValidationError("cover_cokernel_bound: odd case needs H_2(G)_(p) = p and the p-fold cover");
    } else {
        if (cover_n != 2 && cover_n != 4)
            throw ValidationError("cover_cokernel_bound: p = 2 covers handled are n = 2 and n = 4");
        if (cover_n == 4 && N != 4)
            throw ValidationError("cover_cokernel_bound: the n = 4 case needs H_2(G)_(2) = 4");
        if (N % cover_n != 0) throw ValidationError("cover_cokernel_bound: n must divide |H_2(G)_(p)|");
    }

    out.e2 = schur_cover_page(p, cover_n, N);
    out.e4 = turn_page(out.e2, schur_cover_d3(cover_n, N));

    // cokernel of H^4(G) -> H^4(nG): the fiber-side degree-4 cells that can
    // still be nonzero at E_infty, namely E4^{0,4} and E4^{2,2}
    const AbelianGroup& e04 = out.e4.cell(0, 4).group;
    const AbelianGroup& e22 = out.e4.cell(2, 2).group;
    out.divisor = (e04.order() * e22.order()).to_int64();

    if (p % 2) {
        out.all_restrict_trivially_to_central = e04.is_trivial();
    } else if (cover_n == 2) {
        out.coker_max_needs_central_class = !e04.is_trivial();
    } else {
        // surviving fiber classes lie in 2 * H^4(Z/4), which dies on the
        // central 2 inside the central 4
        out.vanish_on_central_two_of_four = true;
    }
    return out;
}

}  // namespace h4
