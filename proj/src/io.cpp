#include "qfact/io.hpp"

#include <sstream>

#include "qfact/error.hpp"

namespace qfact::io {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != ' ' && ch != '\t') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

json vec_json(const std::vector<int>& v) {
    json a = json::array();
    for (int x : v) a.push_back(x);
    return a;
}

} // namespace

json to_json(const Rational& x) { return x.str(); }

Rational rational_from_json(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw ParseError("expected a rational string, got " + j.dump());
}

json to_json(const Mat2& m) {
    return json::array({json::array({to_json(m.a), to_json(m.b_raw)}), json::array({to_json(m.c), to_json(m.d)})});
}

Mat2 mat2_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
        j[1].size() != 2)
        throw ParseError("matrix must be [[a,b],[c,d]]");
    return {rational_from_json(j[0][0]), rational_from_json(j[0][1]), rational_from_json(j[1][0]),
            rational_from_json(j[1][1])};
}

Mat2 parse_matrix(std::string_view text) {
    auto first = text.find_first_not_of(" \t");
    if (first != std::string_view::npos && text[first] == '[') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed matrix JSON: ") + e.what());
        }
        return mat2_from_json(j);
    }
    auto parts = split(text, ',');
    if (parts.size() != 4) throw ParseError("matrix needs four entries a,b_raw,c,d");
    return {Rational::parse(parts[0]), Rational::parse(parts[1]), Rational::parse(parts[2]),
            Rational::parse(parts[3])};
}

json to_json(const Form& q) {
    return {{"a", to_json(q.a)}, {"b", to_json(q.b)}, {"c", to_json(q.c)},
            {"u", to_json(q.u)}, {"v", to_json(q.v)}, {"w", to_json(q.w)}};
}

Form parse_form(std::string_view text) {
    auto parts = split(text, ',');
    if (parts.size() != 6) throw ParseError("form needs six coefficients a,b,c,u,v,w");
    return {Rational::parse(parts[0]), Rational::parse(parts[1]), Rational::parse(parts[2]),
            Rational::parse(parts[3]), Rational::parse(parts[4]), Rational::parse(parts[5])};
}

json to_json(const C0Element<Rational>& x) {
    json a = json::array();
    for (const auto& c : x.x) a.push_back(to_json(c));
    return a;
}

json to_json(const AtomClassTag& t) {
    json j{{"class", to_string(t.cls)}};
    switch (t.cls) {
    case AtomClass::I_upper:
    case AtomClass::I_lower:
        j["lambda"] = t.lambda;
        break;
    case AtomClass::II_8:
        j["k"] = t.k;
        [[fallthrough]];
    case AtomClass::II_3:
    case AtomClass::II_4:
        j["m"] = t.m;
        j["m_prime"] = t.m_prime;
        j["epsilon"] = t.epsilon;
        j["delta"] = t.delta;
        break;
    case AtomClass::II_5:
        j["m"] = t.m;
        j["epsilon"] = t.epsilon;
        break;
    case AtomClass::II_6:
        j["m_prime"] = t.m_prime;
        j["delta"] = t.delta;
        break;
    case AtomClass::II_7:
        break;
    }
    return j;
}

json to_json(const LengthProfile& p) {
    return {{"lengths", vec_json(p.lengths)},
            {"delta", vec_json(p.delta)},
            {"elasticity", p.elasticity.str()},
            {"catenary", p.catenary},
            {"count", p.count}};
}

json to_json(const Submodule& m) {
    json a = json::array();
    for (const auto& row : m.rows()) a.push_back(row);
    return a;
}

json to_json(const ResidueClassification& c) {
    auto basis = [](const std::vector<FpVec>& v) {
        json a = json::array();
        for (const auto& x : v) a.push_back(x);
        return a;
    };
    return {{"case", c.case_label},
            {"radical", basis(c.radical)},
            {"radical_square", basis(c.radical_square)},
            {"radical_cube", basis(c.radical_cube)},
            {"quotient", to_string(c.quotient)}};
}

json atom_table_json(const std::vector<AtomEntry>& atoms) {
    json a = json::array();
    for (const auto& e : atoms)
        a.push_back({{"tag", to_json(e.tag)}, {"matrix", to_json(e.matrix)}, {"norm_valuation", e.norm_valuation}});
    return a;
}

std::string atom_table_csv(const std::vector<AtomEntry>& atoms) {
    std::ostringstream os;
    os << "class,lambda,m,m_prime,epsilon,delta,k,norm_valuation,a,b_raw,c,d\n";
    for (const auto& e : atoms) {
        const auto& t = e.tag;
        os << to_string(t.cls) << ',' << t.lambda << ',' << t.m << ',' << t.m_prime << ',' << t.epsilon << ','
           << t.delta << ',' << t.k << ',' << e.norm_valuation << ',' << e.matrix.a << ',' << e.matrix.b_raw << ','
           << e.matrix.c << ',' << e.matrix.d << '\n';
    }
    return os.str();
}

json factorizations_json(const EichlerMonoid& M, const FactorizationSet<Mat2>& s) {
    json out = json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto z = materialize(M, s, i);
        json atoms = json::array();
        for (const auto& u : z.atoms) atoms.push_back(to_json(u));
        out.push_back({{"leading_unit", to_json(z.leading_unit)}, {"atoms", atoms}});
    }
    return out;
}

std::string profile_csv(const LengthProfile& p) {
    auto join = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
        return s;
    };
    std::ostringstream os;
    os << "lengths,delta,elasticity,catenary,count\n"
       << join(p.lengths) << ',' << join(p.delta) << ',' << p.elasticity.str() << ',' << p.catenary << ','
       << p.count << '\n';
    return os.str();
}

std::string factorization_dot(const EichlerMonoid& M, const FactorizationSet<Mat2>& s, const DistanceTable& t,
                              int max_distance) {
    std::ostringstream os;
    os << "graph factorizations {\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto z = materialize(M, s, i);
        std::string label;
        for (std::size_t k = 0; k < z.atoms.size(); ++k) label += (k ? " * " : "") + z.atoms[k].str();
        os << "  z" << i << " [label=\"" << label << "\"];\n";
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            int d = t.distance(i, j);
            if (d <= max_distance) os << "  z" << i << " -- z" << j << " [label=\"" << d << "\"];\n";
        }
    os << "}\n";
    return os.str();
}

} // namespace qfact::io
