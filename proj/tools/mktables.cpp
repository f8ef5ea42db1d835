// Regenerates the bundled cyclic-group character tables.
//   mktables <output-dir>
#include <fstream>
#include <iostream>

#include "h4/chartab.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: mktables <output-dir>\n";
        return 1;
    }
    std::string dir = argv[1];
    for (long long n = 1; n <= 24; ++n) {
        std::string text = h4::cyclic_table_json(n);
        h4::CharacterTable::load_json_text(text);  // validate before writing
        std::ofstream out(dir + "/c" + std::to_string(n) + ".json");
        out << text;
    }
    std::cout << "wrote c1..c24\n";
    return 0;
}
