// Command-line surface for the exact H^4 workbench. One command per process,
// deterministic byte-stable reports, no network, no environment configuration
// beyond an optional data-directory override.
#include <iostream>

#include "CLI11.hpp"

#include "h4/chartab.hpp"
#include "h4/charclass.hpp"
#include "h4/errors.hpp"
#include "h4/ledger.hpp"
#include "h4/oracle.hpp"
#include "h4/pgroups.hpp"
#include "h4/report.hpp"
#include "h4/specseq.hpp"

using namespace h4;
using nlohmann::json;

namespace {

json spectrum_json(const Spectrum& s) {
    json out;
    out["modulus"] = s.modulus;
    json mult = json::object();
    for (auto& [j, m] : s.mult) mult[std::to_string(j)] = m;
    out["multiplicities"] = mult;
    return out;
}

json description_json(const CohomologyDescription& d) {
    json out;
    out["p"] = d.p;
    out["degree"] = d.degree;
    out["order"] = d.order.to_string();
    out["split"] = d.split;
    out["extension_known"] = d.extension_known;
    out["exponent_bound"] = d.exponent_bound;
    if (d.group) out["group"] = d.group->to_string();
    json layers = json::array();
    for (const auto& l : d.layers) {
        json layer;
        layer["dim"] = l.dim;
        layer["name"] = l.name;
        layers.push_back(layer);
    }
    out["layers"] = layers;
    if (!d.note.empty()) out["note"] = d.note;
    return out;
}

json page_json(const Page& p) {
    json out;
    out["page"] = p.page_number();
    if (!p.name().empty()) out["name"] = p.name();
    json cells = json::array();
    for (const auto& e : p.nonzero_cells()) {
        json c;
        c["i"] = e.i;
        c["j"] = e.j;
        c["group"] = e.cell.unknown ? std::string("unknown") : e.cell.group.to_string();
        c["provenance"] = e.cell.provenance;
        cells.push_back(c);
    }
    out["cells"] = cells;
    return out;
}

struct TextWriter {
    bool enabled = false;
    std::ostringstream os;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact characteristic-class and cohomology workbench"};
    app.require_subcommand(1);
    bool text_mode = false;
    app.add_flag("--text", text_mode, "human-readable table output instead of the JSON report");

    std::vector<std::string> argv_echo(argv, argv + argc);
    if (!argv_echo.empty()) argv_echo[0] = "h4";  // reports are path independent
    Report report(argv_echo);

    // chern / phalf / spectrum / indicator --------------------------------
    std::string table_path, char_label, class_name;
    long long lift_order = 0;

    CLI::App* chern = app.add_subcommand("chern", "c1 and c2 of a character restricted to a cyclic subgroup");
    chern->add_option("table", table_path)->required();
    chern->add_option("character", char_label)->required();
    chern->add_option("class", class_name)->required();

    CLI::App* phalf = app.add_subcommand("phalf", "half Pontryagin class on the spin lift of a cyclic subgroup");
    phalf->add_option("table", table_path)->required();
    phalf->add_option("character", char_label)->required();
    phalf->add_option("class", class_name)->required();
    phalf->add_option("--lift-order", lift_order, "order of the lifted cyclic subgroup (n or 2n)")->required();

    CLI::App* spectrum = app.add_subcommand("spectrum", "exact eigenvalue multiplicities of a class");
    spectrum->add_option("table", table_path)->required();
    spectrum->add_option("character", char_label)->required();
    spectrum->add_option("class", class_name)->required();

    CLI::App* indicator = app.add_subcommand("indicator", "Frobenius-Schur indicator");
    indicator->add_option("table", table_path)->required();
    indicator->add_option("character", char_label)->required();

    // pgroup ---------------------------------------------------------------
    CLI::App* pgroup = app.add_subcommand("pgroup", "closed-form cohomology of elementary abelian and extraspecial groups");
    CLI::App* pgroup_h = pgroup->add_subcommand("h4", "low-degree cohomology description");
    long long pg_p = 2;
    int pg_m = 1, pg_arf = 0, pg_degree = 4;
    std::string pg_kind;
    pgroup_h->add_option("--p", pg_p, "prime")->required();
    pgroup_h->add_option("--kind", pg_kind, "elem | extra-odd | extra-2")->required();
    pgroup_h->add_option("--m", pg_m, "rank (elem) or half-rank m of p^{1+2m}")->required();
    pgroup_h->add_option("--arf", pg_arf, "Arf invariant for extra-2 (0 plus, 1 minus)");
    pgroup_h->add_option("--degree", pg_degree, "cohomological degree (2, 3 or 4)");

    // fixed ------------------------------------------------------------------
    CLI::App* fixed = app.add_subcommand("fixed", "fixed points of a module functor on generator matrices");
    std::string matrices_path, functor_name = "id";
    long long fx_p = 3;
    fixed->add_option("matrices", matrices_path)->required();
    fixed->add_option("--functor", functor_name,
                      "id | dual | sym2-dual | alt2-dual | alt3-dual | alt2-dual-omega-complement | alt3-dual-mod-wedge");
    fixed->add_option("--p", fx_p, "prime of the matrix entries")->required();

    // page --------------------------------------------------------------------
    CLI::App* page_cmd = app.add_subcommand("page", "spectral-sequence pages");
    CLI::App* page_run = page_cmd->add_subcommand("run", "assemble a page file, apply its differentials, report bounds");
    std::string page_path;
    page_run->add_option("file", page_path)->required();

    // ledger --------------------------------------------------------------------
    CLI::App* ledger_cmd = app.add_subcommand("ledger", "divisibility-fact deduction");
    CLI::App* ledger_run = ledger_cmd->add_subcommand("run", "run a case file and print the certified report");
    std::string case_path, data_dir = ".";
    ledger_run->add_option("file", case_path)->required();
    ledger_run->add_option("--data-dir", data_dir, "directory fixture paths are resolved against");

    // oracle ----------------------------------------------------------------------
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force bar-resolution cohomology");
    CLI::App* oracle_h = oracle_cmd->add_subcommand("h", "H^k of a multiplication table");
    std::string mult_path;
    int oracle_degree = 4, oracle_cap = 12;
    oracle_h->add_option("--table", mult_path)->required();
    oracle_h->add_option("--degree", oracle_degree, "degree k (0..4)");
    oracle_h->add_option("--cap", oracle_cap, "group-order cap (default 12; higher is slow)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    TextWriter tw;
    tw.enabled = text_mode;

    try {
        if (*chern || *phalf || *spectrum || *indicator) {
            report.add_input_file(table_path);
            CharacterTable t = CharacterTable::load_file(table_path);
            const Character& chi = t.character(char_label);
            if (*indicator) {
                int fs = t.fs_indicator(chi);
                report.results()["indicator"] = fs;
                report.results()["character"] = chi.label;
                report.results()["group"] = t.group_name();
                tw.os << "FS(" << chi.label << ") over " << t.group_name() << " = " << fs << "\n";
            } else {
                int cls = t.class_index(class_name);
                Spectrum s = t.eigenvalue_spectrum(chi, cls);
                report.results()["group"] = t.group_name();
                report.results()["character"] = chi.label;
                report.results()["class"] = class_name;
                report.results()["spectrum"] = spectrum_json(s);
                if (*spectrum) {
                    tw.os << chi.label << " at " << class_name << ": " << s.to_string() << "\n";
                } else if (*chern) {
                    ChernPair cp = chern_restriction(s);
                    report.results()["c1"] = cp.c1;
                    report.results()["c2"] = cp.c2;
                    report.results()["modulus"] = cp.modulus;
                    report.results()["c2_order"] = H4Class{cp.modulus, cp.c2}.order();
                    tw.os << "c2(" << chi.label << ")|" << class_name << " = " << cp.c2 << " (mod "
                          << cp.modulus << "), order " << H4Class{cp.modulus, cp.c2}.order() << "\n";
                } else {
                    HalfPontryagin hp = phalf_restriction(s, lift_order);
                    report.results()["value"] = hp.value.value;
                    report.results()["modulus"] = hp.value.modulus;
                    report.results()["order"] = hp.value.order();
                    json audits = json::array();
                    for (const auto& a : hp.certificate.classes) {
                        json ja;
                        ja["rotation"] = a.rotation;
                        ja["planes"] = a.planes;
                        ja["lift_squares_mod_2n"] = a.lift_squares_mod_2n;
                        ja["both_parities"] = a.both_parities;
                        audits.push_back(ja);
                    }
                    report.results()["certificate"] = audits;
                    report.results()["parity_adjusted"] = hp.certificate.parity_adjusted;
                    tw.os << "p1/2(" << chi.label << ")|" << class_name << " = " << hp.value.value
                          << " (mod " << hp.value.modulus << "), order " << hp.value.order() << "\n";
                }
            }
        } else if (*pgroup_h) {
            CohomologyDescription d;
            if (pg_kind == "elem")
                d = elem_abelian_cohomology(pg_p, pg_m, pg_degree);
            else if (pg_kind == "extra-odd")
                d = extraspecial_odd_cohomology(pg_p, pg_m, pg_degree);
            else if (pg_kind == "extra-2") {
                if (pg_degree != 4) throw ValidationError("extra-2 closed forms are provided in degree 4");
                d = extraspecial_two_h4(pg_m, pg_arf);
                auto [h1, h2] = extraspecial_two_low(pg_m, pg_arf);
                report.results()["h1"] = description_json(h1);
                report.results()["h2"] = description_json(h2);
            } else
                throw ValidationError("pgroup kind must be elem, extra-odd or extra-2");
            report.results()["description"] = description_json(d);
            tw.os << "H^" << pg_degree << " order " << d.order.to_string();
            if (d.group) tw.os << " = " << d.group->to_string();
            tw.os << "\n";
        } else if (*fixed) {
            report.add_input_file(matrices_path);
            auto gens = load_matrix_file(matrices_path, fx_p);
            if (gens.empty()) throw ValidationError("no matrices in file");
            ModuleWithAction base{fx_p, gens[0].rows(), gens, "E"};
            base.validate();
            ModuleWithAction target = base;
            if (functor_name == "id") {
                target = base;
            } else if (functor_name == "dual") {
                target = dual_module(base);
            } else if (functor_name == "sym2-dual") {
                target = sym2_module(dual_module(base));
            } else if (functor_name == "alt2-dual") {
                target = alt2_module(dual_module(base));
            } else if (functor_name == "alt3-dual") {
                target = alt3_module(dual_module(base));
            } else if (functor_name == "alt2-dual-omega-complement") {
                InvariantSymplectic is = find_invariant_symplectic(gens);
                report.results()["multipliers"] = is.multipliers;
                target = alt2_dual_omega_complement(base, is.gram);
            } else if (functor_name == "alt3-dual-mod-wedge") {
                InvariantSymplectic is = find_invariant_symplectic(gens);
                report.results()["multipliers"] = is.multipliers;
                target = alt3_dual_mod_wedge(base, is.gram);
            } else {
                throw ValidationError("unknown functor: " + functor_name);
            }
            FixedPoints fp = fixed_points(target);
            report.results()["functor"] = functor_name;
            report.results()["p"] = fx_p;
            report.results()["module_dim"] = target.dim;
            report.results()["fixed_dimension"] = fp.dimension;
            json basis = json::array();
            for (int c = 0; c < fp.basis.cols(); ++c) {
                json col = json::array();
                for (int i = 0; i < fp.basis.rows(); ++i) col.push_back(fp.basis.at(i, c));
                basis.push_back(col);
            }
            report.results()["fixed_basis"] = basis;
            tw.os << functor_name << " on " << gens.size() << " generators: module dim " << target.dim
                  << ", fixed dim " << fp.dimension << "\n";
        } else if (*page_run) {
            report.add_input_file(page_path);
            Page p = Page::load_file(page_path);
            report.results()["e_page"] = page_json(p);
            // apply differentials listed in the file
            std::vector<DifferentialSpec> specs;
            for (const auto& fd : p.file_differentials()) {
                if (fd.kind == "zero")
                    specs.push_back(DifferentialSpec::zero(fd.r, fd.i, fd.j));
                else if (fd.kind == "injective")
                    specs.push_back(DifferentialSpec::injective(fd.r, fd.i, fd.j));
                else if (fd.kind == "mult")
                    specs.push_back(DifferentialSpec::mult(fd.r, fd.i, fd.j, fd.k));
                else if (fd.kind == "matrix")
                    specs.push_back(DifferentialSpec::matrix(
                        fd.r, fd.i, fd.j, IntMat::from_triples(fd.matrix_rows, fd.matrix_cols, fd.matrix)));
                else
                    throw ValidationError("unknown differential kind: " + fd.kind);
            }
            Page turned = specs.empty() ? p : turn_page(p, specs);
            if (!specs.empty()) report.results()["turned_page"] = page_json(turned);
            bool unknown_deg4 = false;
            for (int i = 0; i <= 4; ++i)
                if (turned.cell(i, 4 - i).unknown) unknown_deg4 = true;
            if (!unknown_deg4) {
                Degree4Interval iv = degree4_interval(turned);
                report.results()["degree4_upper"] = iv.upper.to_string();
                report.results()["degree4_lower"] = iv.lower.to_string();
                report.results()["degree4_exact"] = iv.exact;
                tw.os << "degree-4 bound: " << iv.lower.to_string() << " .. " << iv.upper.to_string()
                      << (iv.exact ? " (exact)" : "") << "\n";
            } else {
                report.results()["degree4_upper"] = "undetermined (unknown cell in total degree 4)";
                tw.os << "degree-4 bound undetermined: unknown cell in total degree 4\n";
            }
        } else if (*ledger_run) {
            report.add_input_file(case_path);
            CaseReport cr = run_case_file(case_path, data_dir);
            report.results()["report"] = json::parse(cr.json_text);
            for (const Conclusion& c : cr.conclusions) {
                tw.os << "H4(" << c.subject << ")";
                if (c.p) tw.os << "_(" << c.p << ")";
                if (c.determined)
                    tw.os << " = " << c.value->to_string() << "\n";
                else if (c.order_upper)
                    tw.os << " has order between " << c.order_lower.to_string() << " and "
                          << c.order_upper->to_string() << "\n";
                else
                    tw.os << " has order divisible by " << c.order_lower.to_string() << "\n";
            }
        } else if (*oracle_h) {
            report.add_input_file(mult_path);
            MultTable g = MultTable::load_file(mult_path);
            AbelianGroup h = bar_cohomology(g, oracle_degree, oracle_cap);
            report.results()["order"] = g.order();
            report.results()["degree"] = oracle_degree;
            report.results()["cohomology"] = h.to_string();
            tw.os << "H^" << oracle_degree << " = " << h.to_string() << " (group of order " << g.order()
                  << ")\n";
        }
    } catch (const ContradictionError& e) {
        if (tw.enabled)
            std::cout << "contradiction: " << e.what() << "\n";
        else
            std::cout << report.to_json_text(std::string("contradiction: ") + e.what());
        return 2;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        if (tw.enabled)
            std::cout << "error: " << e.what() << "\n";
        else
            std::cout << report.to_json_text(std::string("error: ") + e.what());
        return 1;
    }

    if (tw.enabled)
        std::cout << tw.os.str();
    else
        std::cout << report.to_json_text();
    return 0;
}
