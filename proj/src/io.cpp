#include "msr/io.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "msr/rng.hpp"

namespace msr {

namespace {

std::string hex(std::uint64_t value)
{
    std::ostringstream os;
    os << "0x" << std::hex << value;
    return os.str();
}

std::uint32_t parse_hex(const Json& j, const char* what)
{
    if (!j.is_string()) {
        fail(ErrorCode::Format, std::string(what) + " must be a hex string");
    }
    const std::string s = j.get<std::string>();
    if (s.size() < 3 || s.size() > 10 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X')) {
        fail(ErrorCode::Format, std::string(what) + " is not a 0x-prefixed hex string: " + s);
    }
    std::uint64_t value = 0;
    for (std::size_t i = 2; i < s.size(); ++i) {
        const char c = s[i];
        int digit = -1;
        if (c >= '0' && c <= '9') {
            digit = c - '0';
        } else if (c >= 'a' && c <= 'f') {
            digit = c - 'a' + 10;
        } else if (c >= 'A' && c <= 'F') {
            digit = c - 'A' + 10;
        }
        if (digit < 0) {
            fail(ErrorCode::Format, std::string(what) + " is not a hex string: " + s);
        }
        value = value * 16 + static_cast<std::uint64_t>(digit);
    }
    return static_cast<std::uint32_t>(value);
}

Symbol parse_symbol(const Json& j, const GaloisField& field, const char* what)
{
    const std::uint32_t v = parse_hex(j, what);
    if (!field.contains(v)) {
        fail(ErrorCode::Format, std::string(what) + " lies outside the field");
    }
    return static_cast<Symbol>(v);
}

const Json& member(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) {
        fail(ErrorCode::Format, std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

std::vector<Symbol> symbol_list(const Json& j, const GaloisField& field, const char* what)
{
    if (!j.is_array()) {
        fail(ErrorCode::Format, std::string(what) + " must be an array");
    }
    std::vector<Symbol> out;
    for (const auto& e : j) {
        out.push_back(parse_symbol(e, field, what));
    }
    return out;
}

} // namespace

bool is_nonnegative_integer(const Json& j)
{
    return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

Json field_to_json(const GaloisField& field)
{
    Json j;
    j["degree"] = field.degree();
    j["reduction_poly"] = hex(field.polynomial());
    return j;
}

FieldRef field_from_json(const Json& j)
{
    const Json& degree = member(j, "degree");
    if (!is_nonnegative_integer(degree)) {
        fail(ErrorCode::Format, "field degree must be a positive integer");
    }
    try {
        return GaloisField::make(degree.get<unsigned>(), parse_hex(member(j, "reduction_poly"), "reduction_poly"));
    } catch (const Error& e) {
        fail(ErrorCode::Format, e.what());
    }
}

Json params_to_json(const CodeParams& p)
{
    if (!p.cauchy) {
        fail(ErrorCode::Format, "only parameters with Cauchy generators can be serialized");
    }
    const GaloisField& f = p.gf();
    auto symbols = [&f](std::span<const Symbol> values) {
        Json arr = Json::array();
        for (Symbol s : values) {
            arr.push_back(f.format(s));
        }
        return arr;
    };
    Json j;
    j["version"] = kParamsFormatVersion;
    j["k"] = p.k;
    j["field"] = field_to_json(f);
    j["seed"] = p.seed;
    j["cauchy"] = {{"a", symbols(p.cauchy->a)}, {"b", symbols(p.cauchy->b)}};
    Json v = Json::array();
    for (std::size_t r = 0; r < p.V.rows(); ++r) {
        v.push_back(symbols(p.V.row(r)));
    }
    j["V"] = std::move(v);
    j["delta"] = f.format(p.delta.value());
    j["epsilon"] = f.format(p.epsilon.value());
    j["delta_prime"] = f.format(p.delta_prime.value());
    j["epsilon_prime"] = f.format(p.epsilon_prime.value());
    return j;
}

CodeParams params_from_json(const Json& j)
{
    const Json& version = member(j, "version");
    if (!version.is_number_integer() || version.get<int>() != kParamsFormatVersion) {
        fail(ErrorCode::Format, "unsupported params version");
    }
    const Json& kj = member(j, "k");
    if (!kj.is_number_integer() || kj.get<int>() < 1 || kj.get<int>() > 16) {
        fail(ErrorCode::Format, "k must be an integer in 1..16");
    }
    const int k = kj.get<int>();
    const FieldRef field = field_from_json(member(j, "field"));
    const Json& seed = member(j, "seed");
    if (!is_nonnegative_integer(seed)) {
        fail(ErrorCode::Format, "seed must be a nonnegative integer");
    }

    const Json& cj = member(j, "cauchy");
    CauchySpec spec{field, symbol_list(member(cj, "a"), *field, "cauchy.a"),
                    symbol_list(member(cj, "b"), *field, "cauchy.b")};
    if (spec.a.size() != static_cast<std::size_t>(k) || spec.b.size() != static_cast<std::size_t>(k)) {
        fail(ErrorCode::Format, "cauchy generator lists must have k entries");
    }

    const Json& vj = member(j, "V");
    if (!vj.is_array() || vj.size() != static_cast<std::size_t>(k)) {
        fail(ErrorCode::Format, "V must have k rows");
    }
    std::vector<std::vector<Symbol>> rows;
    for (const auto& row : vj) {
        rows.push_back(symbol_list(row, *field, "V"));
        if (rows.back().size() != static_cast<std::size_t>(k)) {
            fail(ErrorCode::Format, "V rows must have k entries");
        }
    }
    const Matrix V = Matrix::from_rows(field, rows);
    const Element delta(field, parse_symbol(member(j, "delta"), *field, "delta"));
    const Element epsilon(field, parse_symbol(member(j, "epsilon"), *field, "epsilon"));
    const Element delta_prime(field, parse_symbol(member(j, "delta_prime"), *field, "delta_prime"));
    const Element epsilon_prime(field, parse_symbol(member(j, "epsilon_prime"), *field, "epsilon_prime"));

    CodeParams p = [&] {
        try {
            return assemble_params(spec, V, delta, epsilon, seed.get<std::uint64_t>());
        } catch (const Error& e) {
            fail(ErrorCode::Format, std::string("params cannot be rebuilt: ") + e.what());
        }
    }();
    if (!(p.delta_prime == delta_prime) || !(p.epsilon_prime == epsilon_prime)) {
        fail(ErrorCode::Format, "stored delta'/epsilon' disagree with the values recomputed from delta/epsilon");
    }
    return p;
}

std::string params_fingerprint(const CodeParams& p)
{
    const std::string text = params_to_json(p).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json report_to_json(const BandwidthReport& report)
{
    Json j;
    j["k"] = report.k;
    j["d"] = report.d;
    j["r"] = report.r;
    j["blocks"] = report.blocks;
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"newcomer", row.newcomer},
                        {"downloaded", row.downloaded},
                        {"exchanged", row.exchanged},
                        {"gamma", row.gamma},
                        {"optimal_gamma", row.optimal_gamma.to_string()},
                        {"optimal", row.is_optimal}});
    }
    j["rows"] = std::move(rows);
    return j;
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path)
{
    const std::string text = read_text(path);
    return {text.begin(), text.end()};
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(ErrorCode::Io, "cannot write " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        fail(ErrorCode::Io, "short write to " + path.string());
    }
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes)
{
    write_text(path, std::string(bytes.begin(), bytes.end()));
}

Json read_json(const std::filesystem::path& path)
{
    try {
        return Json::parse(read_text(path));
    } catch (const Json::parse_error& e) {
        fail(ErrorCode::Format, path.string() + ": " + e.what());
    }
}

std::string dump_json(const Json& j)
{
    return j.dump(2) + "\n";
}

std::vector<std::uint8_t> random_bytes(std::size_t count, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<std::uint8_t> out(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 8 == 0) {
            word = rng.next();
        }
        out[i] = static_cast<std::uint8_t>(word >> (8 * (i % 8)));
    }
    return out;
}

} // namespace msr
