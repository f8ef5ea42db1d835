// Replays every bundled fixture command through the CLI binary and diffs the
// report byte-for-byte against the golden files.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string run_command(const std::string& cmd) {
    std::string full = "cd \"" + std::string(H4_DATA_DIR) + "\" && \"" + H4_CLI_PATH + "\" " + cmd;
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) return "<popen failed>";
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    pclose(pipe);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Case {
    const char* name;
    const char* cmd;
};

const Case kCases[] = {
    {"chern_m11_perm_8a", "chern tables/m11.json perm 8a"},
    {"phalf_m11_perm_8a", "phalf tables/m11.json perm 8a --lift-order 8"},
    {"spectrum_o73_chi105_4a", "spectrum tables/o73_partial.json chi105 4a"},
    {"spectrum_he_chi19_4a", "spectrum tables/he_partial.json chi19 4a"},
    {"spectrum_2m22_chi210_4c", "spectrum tables/2m22_partial.json chi210 4c"},
    {"chern_o73_chi105_4a", "chern tables/o73_partial.json chi105 4a"},
    {"chern_he_chi19_4a", "chern tables/he_partial.json chi19 4a"},
    {"indicator_sl25_chi2", "indicator tables/sl25.json chi2"},
    {"pgroup_extra2_m2_arf0", "pgroup h4 --p 2 --kind extra-2 --m 2 --arf 0"},
    {"pgroup_extra2_m2_arf1", "pgroup h4 --p 2 --kind extra-2 --m 2 --arf 1"},
    {"pgroup_extraodd_p3_m3", "pgroup h4 --p 3 --kind extra-odd --m 3"},
    {"fixed_o73_sym2dual", "fixed matrices/o73_parabolic_f3.txt --functor sym2-dual --p 3"},
    {"fixed_o73_alt3modwedge", "fixed matrices/o73_parabolic_f3.txt --functor alt3-dual-mod-wedge --p 3"},
    {"page_dempwolff", "page run pages/dempwolff_25gl52.json"},
    {"page_co2", "page run pages/co2_210_m22.json"},
    {"page_cover_p3_demo", "page run pages/cover_p3_demo.json"},
    {"ledger_m11", "ledger run cases/m11.case.json --data-dir ."},
    {"ledger_m22", "ledger run cases/m22.case.json --data-dir ."},
    {"ledger_dempwolff", "ledger run cases/dempwolff.case.json --data-dir ."},
    {"ledger_co3", "ledger run cases/co3.case.json --data-dir ."},
    {"ledger_suz", "ledger run cases/suz.case.json --data-dir ."},
    {"ledger_g2_5", "ledger run cases/g2_5.case.json --data-dir ."},
    {"oracle_c4_h4", "oracle h --table groups/c4.gt --degree 4"},
};

}  // namespace

int main() {
    int failures = 0;
    for (const Case& c : kCases) {
        std::string got = run_command(c.cmd);
        // the golden echo begins with the program name, not the test's path
        std::string want = read_file(std::string(H4_GOLDEN_DIR) + "/" + c.name + ".json");
        if (want.empty()) {
            std::cout << "FAIL " << c.name << ": missing golden file\n";
            ++failures;
            continue;
        }
        if (got != want) {
            std::cout << "FAIL " << c.name << ": report differs from golden\n";
            std::cout << "--- got (first 400 bytes)\n" << got.substr(0, 400) << "\n";
            std::cout << "--- want (first 400 bytes)\n" << want.substr(0, 400) << "\n";
            ++failures;
        } else {
            std::cout << "ok   " << c.name << "\n";
        }
    }
    if (failures) {
        std::cout << failures << " golden replay(s) failed\n";
        return 1;
    }
    std::cout << "all golden replays match\n";
    return 0;
}
