#include "h4/chartab.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include "json.hpp"

#include "h4/abelian.hpp"
#include "h4/errors.hpp"

namespace h4 {

using nlohmann::json;

namespace {

CycInt parse_value(const json& v) {
    if (v.is_number_integer()) return CycInt(BigInt(v.get<long long>()));
    if (!v.is_array()) throw ValidationError("character value must be an integer or a list of [n, e, c] terms");
    std::vector<std::array<long long, 3>> terms;
    for (const auto& t : v) {
        if (!t.is_array() || t.size() != 3)
            throw ValidationError("cyclotomic term must be [conductor, exponent, coefficient]");
        terms.push_back({t[0].get<long long>(), t[1].get<long long>(), t[2].get<long long>()});
    }
    return CycInt::from_terms(terms);
}

long long order_from_class_name(const std::string& name) {
    size_t i = 0;
    while (i < name.size() && isdigit(static_cast<unsigned char>(name[i]))) ++i;
    if (i == 0 || i == name.size()) throw ValidationError("class name must look like '8a': " + name);
    return std::stoll(name.substr(0, i));
}

}  // namespace

CharacterTable CharacterTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open character table file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_json_text(ss.str());
}

CharacterTable CharacterTable::load_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("character table is not valid JSON: ") + e.what());
    }

    CharacterTable t;
    if (!doc.contains("name") || !doc.contains("order") || !doc.contains("classes") ||
        !doc.contains("powermaps") || !doc.contains("irreducibles"))
        throw ValidationError("character table document needs name/order/classes/powermaps/irreducibles");

    t.name_ = doc["name"].get<std::string>();
    if (doc["order"].is_string())
        t.order_ = BigInt::from_string(doc["order"].get<std::string>());
    else
        t.order_ = BigInt(doc["order"].get<long long>());
    t.partial_ = doc.value("partial", false);

    for (const auto& c : doc["classes"]) {
        ClassData cd;
        cd.name = c["name"].get<std::string>();
        cd.element_order = c["order"].get<long long>();
        cd.class_size = c.value("size", 0LL);
        t.classes_.push_back(cd);
    }

    for (auto it = doc["powermaps"].begin(); it != doc["powermaps"].end(); ++it) {
        long long p = std::stoll(it.key());
        std::vector<int> map;
        for (const auto& v : it.value()) map.push_back(v.get<int>());
        t.power_maps_[p] = map;
    }

    auto read_chars = [&](const json& arr, bool irr) {
        for (const auto& c : arr) {
            Character ch;
            ch.label = c["label"].get<std::string>();
            ch.irreducible = irr;
            for (const auto& v : c["values"]) ch.values.push_back(parse_value(v));
            BigInt deg;
            if (ch.values.empty() || !ch.values[0].is_rational_integer(&deg) || !deg.sign())
                throw ValidationError("character '" + ch.label + "': value at the identity must be a positive integer");
            ch.degree = deg.to_int64();
            t.chars_.push_back(std::move(ch));
        }
    };
    read_chars(doc["irreducibles"], true);
    if (doc.contains("characters")) read_chars(doc["characters"], false);

    if (doc.contains("fusions")) {
        for (auto it = doc["fusions"].begin(); it != doc["fusions"].end(); ++it) {
            std::vector<int> map;
            for (const auto& v : it.value()) map.push_back(v.get<int>());
            t.fusions_[it.key()] = map;
        }
    }

    t.validate();
    return t;
}

CharacterTable CharacterTable::cyclic(long long n) { return load_json_text(cyclic_table_json(n)); }

std::string cyclic_table_json(long long n) {
    json doc;
    doc["name"] = "C" + std::to_string(n);
    doc["order"] = n;
    json classes = json::array();
    for (long long k = 0; k < n; ++k) {
        long long ord = n / std::gcd(n, k);
        if (k == 0) ord = 1;
        // order-ord classes named in exponent order: 1a, then na, nb, ... per order
        classes.push_back({{"name", ""}, {"order", ord}, {"size", 1}});
    }
    // assign names: count per order
    std::map<long long, int> seen;
    for (long long k = 0; k < n; ++k) {
        long long ord = k == 0 ? 1 : n / std::gcd(n, k);
        std::string suffix;
        int idx = seen[ord]++;
        // a, b, ..., z, aa, ab, ...
        do {
            suffix.insert(suffix.begin(), static_cast<char>('a' + idx % 26));
            idx = idx / 26 - 1;
        } while (idx >= 0);
        classes[k]["name"] = std::to_string(ord) + suffix;
    }
    doc["classes"] = classes;

    json pm = json::object();
    for (long long p = 2; p <= std::max(2LL, n); ++p) {
        bool prime = true;
        for (long long d = 2; d * d <= p; ++d)
            if (p % d == 0) prime = false;
        if (!prime) continue;
        json arr = json::array();
        for (long long k = 0; k < n; ++k) arr.push_back(static_cast<int>((k * p) % n));
        pm[std::to_string(p)] = arr;
    }
    doc["powermaps"] = pm;

    json irr = json::array();
    for (long long j = 0; j < n; ++j) {
        json values = json::array();
        for (long long k = 0; k < n; ++k) {
            json terms = json::array();
            terms.push_back({n, (j * k) % n, 1});
            values.push_back(terms);
        }
        irr.push_back({{"label", "chi" + std::to_string(j)}, {"values", values}});
    }
    doc["irreducibles"] = irr;
    return doc.dump(2) + "\n";
}

void CharacterTable::validate() {
    if (classes_.empty()) throw ValidationError("table has no classes");
    for (size_t i = 0; i < classes_.size(); ++i) {
        const ClassData& c = classes_[i];
        if (class_lookup_.count(c.name)) throw ValidationError("duplicate class name " + c.name);
        class_lookup_[c.name] = static_cast<int>(i);
        if (order_from_class_name(c.name) != c.element_order)
            throw ValidationError("class " + c.name + ": name does not match element order");
        if (c.element_order < 1) throw ValidationError("class " + c.name + ": bad element order");
        if (!(order_ % BigInt(c.element_order)).is_zero())
            throw ValidationError("class " + c.name + ": element order does not divide the group order");
        if (!partial_ && c.class_size < 1)
            throw ValidationError("class " + c.name + ": missing size in a full table");
    }
    if (classes_[0].element_order != 1)
        throw ValidationError("first class must be the identity");

    if (!partial_) {
        BigInt total(0);
        for (const auto& c : classes_) total += BigInt(c.class_size);
        if (total != order_)
            throw ValidationError("class sizes sum to " + total.to_string() + ", expected " + order_.to_string());
        // every prime dividing the group order must have a power map
        if (!order_.fits_int64())
            throw ValidationError("full tables are limited to 64-bit group orders");
        for (auto [p, e] : factorize(order_.to_int64()))
            if (!power_maps_.count(p))
                throw ValidationError("missing power map for prime " + std::to_string(p));
    }

    for (auto& [p, map] : power_maps_) {
        if (map.size() != classes_.size())
            throw ValidationError("power map for " + std::to_string(p) + " has wrong length");
        for (size_t i = 0; i < map.size(); ++i) {
            if (map[i] < 0 || map[i] >= static_cast<int>(classes_.size()))
                throw ValidationError("power map for " + std::to_string(p) + " has an out-of-range image");
            long long n = classes_[i].element_order;
            long long expect = n / std::gcd(n, p);
            if (classes_[map[i]].element_order != expect)
                throw ValidationError("power map for " + std::to_string(p) + " sends " + classes_[i].name +
                                      " to " + classes_[map[i]].name + " (order should be " +
                                      std::to_string(expect) + ")");
        }
    }

    for (auto& ch : chars_) {
        if (char_lookup_.count(ch.label)) throw ValidationError("duplicate character label " + ch.label);
        char_lookup_[ch.label] = static_cast<int>(&ch - &chars_[0]);
        if (ch.values.size() != classes_.size())
            throw ValidationError("character " + ch.label + " has wrong number of values");
    }

    for (auto& [name, map] : fusions_) {
        if (map.size() != classes_.size())
            throw ValidationError("fusion into " + name + " has wrong length");
    }

    if (!partial_) validate_orthogonality();
}

void CharacterTable::validate_orthogonality() const {
    // column orthogonality: sum over irreducibles chi(c) conj(chi(c')) equals
    // |C_G(c)| when c = c' and 0 otherwise
    size_t nc = classes_.size();
    for (size_t a = 0; a < nc; ++a) {
        for (size_t b = a; b < nc; ++b) {
            CycInt acc;
            for (const auto& ch : chars_) {
                if (!ch.irreducible) continue;
                acc = acc + ch.values[a] * ch.values[b].conjugate();
            }
            BigInt v;
            bool rat = acc.is_rational_integer(&v);
            if (a == b) {
                BigInt centralizer = order_ / BigInt(classes_[a].class_size);
                if (!rat || v != centralizer)
                    throw ValidationError("column orthogonality fails at (" + classes_[a].name + ", " +
                                          classes_[b].name + "): got " + acc.to_string() + ", expected " +
                                          centralizer.to_string());
            } else {
                if (!rat || !v.is_zero())
                    throw ValidationError("column orthogonality fails at (" + classes_[a].name + ", " +
                                          classes_[b].name + "): got " + acc.to_string() + ", expected 0");
            }
        }
    }
}

void CharacterTable::validate_fusion_into(const std::string& name, const CharacterTable& target) const {
    auto it = fusions_.find(name);
    if (it == fusions_.end()) throw ValidationError("no fusion map named " + name + " in table " + name_);
    const std::vector<int>& map = it->second;
    for (size_t i = 0; i < classes_.size(); ++i) {
        if (map[i] < 0 || map[i] >= static_cast<int>(target.classes_.size()))
            throw ValidationError("fusion " + name + ": image index out of range for class " + classes_[i].name);
        if (target.classes_[map[i]].element_order != classes_[i].element_order)
            throw ValidationError("fusion " + name + ": class " + classes_[i].name + " fuses to " +
                                  target.classes_[map[i]].name + " of different element order");
    }
}

int CharacterTable::class_index(const std::string& name) const {
    auto it = class_lookup_.find(name);
    if (it == class_lookup_.end()) throw ValidationError("no class named " + name + " in table " + name_);
    return it->second;
}

const Character& CharacterTable::character(const std::string& label) const {
    auto it = char_lookup_.find(label);
    if (it == char_lookup_.end()) throw ValidationError("no character labeled " + label + " in table " + name_);
    return chars_[it->second];
}

std::vector<std::string> CharacterTable::classes_of_order(long long n) const {
    std::vector<std::string> out;
    for (const auto& c : classes_)
        if (c.element_order == n) out.push_back(c.name);
    return out;
}

int CharacterTable::power_class(int class_idx, long long k) const {
    long long n = classes_[class_idx].element_order;
    long long target = ((k % n) + n) % n;
    if (target == 0) return 0;  // identity class
    if (target == 1) return class_idx;

    // BFS over exponents mod n; edges multiply by an available prime and step
    // through that prime's power map
    std::vector<int> cls_at(n, -1);
    std::vector<long long> visited_exp;
    cls_at[1] = class_idx;
    std::queue<long long> q;
    q.push(1);
    while (!q.empty()) {
        long long e = q.front();
        q.pop();
        if (e == target) return cls_at[e];
        for (auto& [p, map] : power_maps_) {
            long long e2 = (e * p) % n;
            if (cls_at[e2] < 0) {
                cls_at[e2] = map[cls_at[e]];
                q.push(e2);
            }
        }
    }
    if (cls_at[target] >= 0) return cls_at[target];
    throw ValidationError("cannot resolve power " + std::to_string(k) + " of class " +
                          classes_[class_idx].name + ": missing power map for a required prime");
}

CycInt CharacterTable::power_value(const Character& chi, int class_idx, long long k) const {
    if (k < 0) throw ValidationError("power_value: k must be >= 0");
    return chi.values[power_class(class_idx, k)];
}

Spectrum CharacterTable::eigenvalue_spectrum(const Character& chi, int class_idx) const {
    long long n = classes_[class_idx].element_order;
    std::vector<CycInt> chi_pow(n);
    for (long long k = 0; k < n; ++k) chi_pow[k] = power_value(chi, class_idx, k);

    Spectrum s;
    s.modulus = n;
    for (long long j = 0; j < n; ++j) {
        CycInt acc;
        for (long long k = 0; k < n; ++k)
            acc = acc + chi_pow[k] * CycInt::root_of_unity(n, -j * k);
        BigInt total;
        if (!acc.is_rational_integer(&total))
            throw ValidationError("eigenvalue multiplicity for exponent " + std::to_string(j) +
                                  " is not rational (inconsistent table data)");
        if (!(total % BigInt(n)).is_zero())
            throw ValidationError("eigenvalue multiplicity for exponent " + std::to_string(j) +
                                  " is not integral (inconsistent table data)");
        BigInt m = total / BigInt(n);
        if (m.is_neg())
            throw ValidationError("negative eigenvalue multiplicity at exponent " + std::to_string(j));
        if (!m.is_zero()) s.mult[j] = m.to_int64();
    }

    if (s.degree() != chi.degree)
        throw ValidationError("eigenvalue multiplicities do not sum to the degree");
    // reconstruction check: sum_j m_j zeta^{jk} = chi(g^k) for every k
    for (long long k = 0; k < n; ++k) {
        CycInt rec;
        for (auto& [j, m] : s.mult)
            rec = rec + CycInt::root_of_unity(n, j * k % n, BigInt(m));
        if (rec != chi_pow[k])
            throw InternalError("eigenvalue spectrum fails character reconstruction at power " + std::to_string(k));
    }
    return s;
}

int CharacterTable::fs_indicator(const Character& chi) const {
    if (partial_) throw ValidationError("Frobenius-Schur indicator needs a full table");
    if (!power_maps_.count(2)) throw ValidationError("Frobenius-Schur indicator needs the power-2 map");
    const std::vector<int>& p2 = power_maps_.at(2);
    CycInt acc;
    for (size_t i = 0; i < classes_.size(); ++i)
        acc = acc + chi.values[p2[i]] * CycInt(BigInt(classes_[i].class_size));
    BigInt v;
    if (!acc.is_rational_integer(&v))
        throw ValidationError("indicator sum is not rational (corrupt table)");
    if (!(v % order_).is_zero())
        throw ValidationError("indicator sum is not divisible by the group order (corrupt table)");
    BigInt ind = v / order_;
    if (ind < BigInt(-1) || ind > BigInt(1))
        throw ValidationError("indicator of " + chi.label + " is " + ind.to_string() +
                              ", outside {-1,0,1} (character is not irreducible or table is corrupt)");
    return static_cast<int>(ind.to_int64());
}

}  // namespace h4
