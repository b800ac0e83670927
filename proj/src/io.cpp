#include "qcmdo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "json.hpp"

namespace qcmdo::io {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
    throw Error(ErrorCode::ParseError, what);
}

std::string number(double v) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "cannot write a non-finite number");
    return format_double(v == 0.0 ? 0.0 : v);
}

std::string complex_text(const Complex& z) {
    return "[" + number(z.real()) + ", " + number(z.imag()) + "]";
}

double json_number(const Json& j, const char* where) {
    if (!j.is_number()) parse_fail(std::string("expected a number in ") + where);
    return j.get<double>();
}

Complex json_complex(const Json& j, const char* where) {
    if (!j.is_array() || j.size() != 2) parse_fail(std::string("expected an [re, im] pair in ") + where);
    return {json_number(j[0], where), json_number(j[1], where)};
}

CVector json_cvector(const Json& j, const char* where) {
    if (!j.is_array()) parse_fail(std::string("expected an array for ") + where);
    CVector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = json_complex(j[i], where);
    return v;
}

CMatrix json_cmatrix(const Json& j, Index cols, const char* where) {
    if (!j.is_array()) parse_fail(std::string("expected an array of rows for ") + where);
    CMatrix out(static_cast<Index>(j.size()), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        const auto& row = j[r];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            parse_fail(std::string("row ") + std::to_string(r) + " of " + where + " has the wrong length");
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            out(static_cast<Index>(r), static_cast<Index>(c)) = json_complex(row[c], where);
        }
    }
    return out;
}

void emit_vector(std::ostringstream& out, const CVector& v) {
    out << '[';
    for (Index i = 0; i < v.size(); ++i) out << (i ? ", " : "") << complex_text(v(i));
    out << ']';
}

void emit_matrix(std::ostringstream& out, const CMatrix& m) {
    if (m.rows() == 0) {
        out << "[]";
        return;
    }
    out << "[\n";
    for (Index r = 0; r < m.rows(); ++r) {
        out << "    ";
        emit_vector(out, m.row(r).transpose());
        out << (r + 1 < m.rows() ? ",\n" : "\n");
    }
    out << "  ]";
}

Json complex_json(const Complex& z) {
    return Json::array({z.real(), z.imag()});
}

}  // namespace

QcmdoProblem parse_problem(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        parse_fail(std::string("problem file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) parse_fail("problem file must be a JSON object");
    for (const char* key : {"n", "m", "A", "b", "c", "F", "d", "domains"}) {
        if (!doc.contains(key)) parse_fail(std::string("problem file lacks \"") + key + "\"");
    }
    if (!doc["n"].is_number_unsigned() || !doc["m"].is_number_unsigned()) {
        parse_fail("n and m must be non-negative integers");
    }
    const auto n = doc["n"].get<Index>();
    const auto m = doc["m"].get<Index>();

    CMatrix a = json_cmatrix(doc["A"], n, "A");
    CVector b = json_cvector(doc["b"], "b");
    const Complex c = json_complex(doc["c"], "c");
    CMatrix f = json_cmatrix(doc["F"], n, "F");
    CVector d = json_cvector(doc["d"], "d");
    if (a.rows() != n) parse_fail("A must have n rows");
    if (f.rows() != m) parse_fail("F must have m rows");

    const auto& jd = doc["domains"];
    if (!jd.is_array()) parse_fail("domains must be an array");
    std::vector<VariableDomain> domains;
    for (const auto& entry : jd) {
        if (entry.is_string() && entry.get<std::string>() == "continuous") {
            domains.push_back(VariableDomain::continuous());
        } else if (entry.is_object() && entry.size() == 1 && entry.contains("discrete")) {
            const CVector v = json_cvector(entry["discrete"], "domains");
            domains.push_back(VariableDomain::discrete(std::vector<Complex>(v.data(), v.data() + v.size())));
        } else {
            parse_fail("a domain is \"continuous\" or {\"discrete\": [...]}");
        }
    }
    return QcmdoProblem(std::move(a), std::move(b), Complex(c), std::move(f), std::move(d), std::move(domains));
}

std::string format_problem(const QcmdoProblem& problem) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"n\": " << problem.n() << ",\n";
    out << "  \"m\": " << problem.m() << ",\n";
    out << "  \"A\": ";
    emit_matrix(out, problem.A());
    out << ",\n  \"b\": ";
    emit_vector(out, problem.b());
    out << ",\n  \"c\": " << complex_text({problem.c(), problem.c_imag()});
    out << ",\n  \"F\": ";
    emit_matrix(out, problem.F());
    out << ",\n  \"d\": ";
    emit_vector(out, problem.d());
    out << ",\n  \"domains\": [";
    const auto& domains = problem.domains();
    for (std::size_t i = 0; i < domains.size(); ++i) {
        out << (i ? ",\n" : "\n") << "    ";
        if (domains[i].is_continuous()) {
            out << "\"continuous\"";
        } else {
            const auto& vals = domains[i].values();
            out << "{\"discrete\": ";
            emit_vector(out, Eigen::Map<const CVector>(vals.data(), static_cast<Index>(vals.size())));
            out << '}';
        }
    }
    out << (domains.empty() ? "]\n" : "\n  ]\n");
    out << "}\n";
    return out.str();
}

QuboFile parse_qubo(const std::string& text) {
    QuboFile out;
    std::istringstream in(text);
    std::string line;
    bool have_program = false;
    bool have_offset = false;
    std::size_t p = 0, n_diag = 0, n_off = 0, seen_diag = 0, seen_off = 0;
    std::map<std::pair<std::size_t, std::size_t>, double> entries;
    int line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        if (line[0] == 'c') {
            if (line.rfind("c offset ", 0) == 0) {
                if (have_offset) parse_fail(where + ": second offset line");
                out.qubo.k = parse_double(line.substr(9));
                have_offset = true;
            } else {
                out.comments.push_back(line.substr(1));
            }
            continue;
        }
        std::istringstream fields(line);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        auto to_index = [&](const std::string& t) {
            if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
                parse_fail(where + ": '" + t + "' is not a non-negative integer");
            }
            return static_cast<std::size_t>(std::stoull(t));
        };
        if (tok[0] == "p") {
            if (have_program) parse_fail(where + ": second program line");
            if (tok.size() != 6 || tok[1] != "qubo" || tok[2] != "0") {
                parse_fail(where + ": expected 'p qubo 0 <p> <nDiag> <nOffDiag>'");
            }
            p = to_index(tok[3]);
            n_diag = to_index(tok[4]);
            n_off = to_index(tok[5]);
            if (p > 4096) parse_fail(where + ": too many variables");
            have_program = true;
            continue;
        }
        if (!have_program) parse_fail(where + ": entry before the program line");
        if (tok.size() != 3) parse_fail(where + ": expected 'i j value'");
        std::size_t i = to_index(tok[0]), j = to_index(tok[1]);
        const double v = parse_double(tok[2]);
        if (i >= p || j >= p) parse_fail(where + ": index out of range");
        if (i > j) std::swap(i, j);
        if (!entries.emplace(std::make_pair(i, j), v).second) parse_fail(where + ": duplicate entry");
        (i == j ? seen_diag : seen_off) += 1;
    }
    if (!have_program) parse_fail("missing program line");
    if (seen_diag != n_diag || seen_off != n_off) {
        parse_fail("entry counts do not match the program line");
    }
    RMatrix m = RMatrix::Zero(static_cast<Index>(p), static_cast<Index>(p));
    for (const auto& [ij, v] : entries) {
        const auto i = static_cast<Index>(ij.first), j = static_cast<Index>(ij.second);
        if (i == j) {
            m(i, i) = v;
        } else {
            m(i, j) = m(j, i) = 0.5 * v;
        }
    }
    out.qubo.M = std::move(m);
    return out;
}

std::string format_qubo(const QuboProblem& qubo, const std::vector<std::string>& comments) {
    const RMatrix& m = qubo.M;
    const Index p = m.rows();
    std::size_t n_diag = 0, n_off = 0;
    for (Index i = 0; i < p; ++i) {
        if (m(i, i) != 0.0) ++n_diag;
        for (Index j = i + 1; j < p; ++j) {
            if (m(i, j) != 0.0) ++n_off;
        }
    }
    std::ostringstream out;
    for (const auto& c : comments) out << 'c' << c << '\n';
    out << "p qubo 0 " << p << ' ' << n_diag << ' ' << n_off << '\n';
    for (Index i = 0; i < p; ++i) {
        if (m(i, i) != 0.0) out << i << ' ' << i << ' ' << number(m(i, i)) << '\n';
    }
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) {
            if (m(i, j) != 0.0) out << i << ' ' << j << ' ' << number(2.0 * m(i, j)) << '\n';
        }
    }
    out << "c offset " << number(qubo.k) << '\n';
    return out.str();
}

std::string format_encodings(const QuboProblem& qubo) {
    Json doc;
    doc["p"] = qubo.p();
    Json encs = Json::array();
    for (const auto& e : qubo.encodings) {
        Json j;
        j["scheme"] = e.scheme == EncodingScheme::OneHot ? "one-hot" : "binary";
        j["offset"] = complex_json(e.offset);
        j["coeffs"] = Json::array();
        for (const auto& c : e.coeffs) j["coeffs"].push_back(complex_json(c));
        j["values"] = Json::array();
        for (const auto& v : e.value_table) j["values"].push_back(complex_json(v));
        encs.push_back(std::move(j));
    }
    doc["encodings"] = std::move(encs);
    if (qubo.penalty) {
        Json pen;
        pen["lambda"] = qubo.penalty->lambda;
        pen["blocks"] = Json::array();
        for (const auto& [a, b] : qubo.penalty->blocks) pen["blocks"].push_back(Json::array({a, b}));
        doc["penalty"] = std::move(pen);
    }
    return doc.dump(2) + "\n";
}

void parse_encodings(const std::string& text, QuboProblem& qubo) {
    Json doc;
    try {
        doc = Json::parse(text);
        std::vector<VariableEncoding> encs;
        std::size_t bits = 0;
        for (const auto& j : doc.at("encodings")) {
            VariableEncoding e;
            const auto scheme = j.at("scheme").get<std::string>();
            if (scheme == "one-hot") {
                e.scheme = EncodingScheme::OneHot;
            } else if (scheme == "binary") {
                e.scheme = EncodingScheme::BinaryExpansion;
            } else {
                parse_fail("unknown encoding scheme '" + scheme + "'");
            }
            e.offset = json_complex(j.at("offset"), "offset");
            for (const auto& c : j.at("coeffs")) e.coeffs.push_back(json_complex(c, "coeffs"));
            for (const auto& v : j.at("values")) e.value_table.push_back(json_complex(v, "values"));
            bits += e.bits();
            encs.push_back(std::move(e));
        }
        if (bits != qubo.p()) parse_fail("encodings cover " + std::to_string(bits) + " bits, the QUBO has " +
                                         std::to_string(qubo.p()));
        std::optional<OneHotPenalty> penalty;
        if (doc.contains("penalty")) {
            OneHotPenalty pen;
            pen.lambda = doc["penalty"].at("lambda").get<double>();
            for (const auto& b : doc["penalty"].at("blocks")) {
                pen.blocks.emplace_back(b.at(0).get<std::size_t>(), b.at(1).get<std::size_t>());
            }
            penalty = std::move(pen);
        }
        qubo.encodings = std::move(encs);
        qubo.penalty = std::move(penalty);
    } catch (const Json::exception& e) {
        parse_fail(std::string("malformed encodings file: ") + e.what());
    }
}

std::string gap_csv(const GapSweep& sweep) {
    std::ostringstream out;
    out << "w,E0,E1,gap\n";
    for (const auto& s : sweep.samples) {
        out << number(s.w) << ',' << number(s.e0) << ',' << number(s.e1) << ',' << number(s.gap()) << '\n';
    }
    return out.str();
}

std::string format_labels(int N, const Bits& true_s) {
    return "N=" + std::to_string(N) + "\ntrue_s=" + bits_to_string(true_s) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + tmp + "'");
        out << contents;
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw Error(ErrorCode::InvalidArgument, "write to '" + tmp + "' failed");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error(ErrorCode::InvalidArgument, "cannot rename into '" + path + "'");
    }
}

}  // namespace qcmdo::io
