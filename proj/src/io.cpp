#include "nlsubdiv/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace nlsd::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

double parse_double(const std::string& cell, std::size_t row) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    if (end == begin || *end != '\0') {
        parse_fail("csv row " + std::to_string(row) + ": '" + cell + "' is not a number");
    }
    return v;
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
    return j.at(key);
}

template <class T>
T get(const Json& j, const char* key) {
    try {
        return field(j, key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        parse_fail(std::string("field '") + key + "': " + e.what());
    }
}

Json int_json(const boost::multiprecision::cpp_int& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
        return v.convert_to<std::int64_t>();
    }
    return v.str();
}

boost::multiprecision::cpp_int int_from_json(const Json& j) {
    if (j.is_number_integer()) return boost::multiprecision::cpp_int(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return boost::multiprecision::cpp_int(j.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    parse_fail("expected an integer, got " + j.dump());
}

std::optional<DiffOrder> order_from_json(const Json& j) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_string()) parse_fail("difference operator must be a string or null");
    return DiffOrder::parse(j.get<std::string>());
}

Json channel_json(const Channel& c) {
    Json j;
    j["coarse"] = to_json(c.coarse);
    j["details"] = Json::array();
    for (const auto& d : c.details) j["details"].push_back(to_json(d));
    bool any = false;
    for (const auto& r : c.residuals) {
        for (double v : r) any = any || v != 0.0;
    }
    if (any) j["detail_residuals"] = c.residuals;
    return j;
}

Channel channel_from_json(const Json& j) {
    Channel c{sequence_from_json(field(j, "coarse")), {}, {}};
    const Json& details = field(j, "details");
    if (!details.is_array()) parse_fail("'details' must be an array");
    for (const auto& d : details) c.details.push_back(sequence_from_json(d));
    if (j.contains("detail_residuals")) {
        c.residuals = get<std::vector<std::vector<double>>>(j, "detail_residuals");
        if (c.residuals.size() != c.details.size()) {
            throw Error(ErrorKind::CorruptPyramid, "detail_residuals has " + std::to_string(c.residuals.size()) +
                                                       " levels, details has " + std::to_string(c.details.size()));
        }
        for (std::size_t k = 0; k < c.details.size(); ++k) {
            if (c.residuals[k].size() != c.details[k].size()) {
                throw Error(ErrorKind::CorruptPyramid,
                            "detail_residuals[" + std::to_string(k) + "] does not match its detail level");
            }
        }
    } else {
        for (const auto& d : c.details) c.residuals.emplace_back(d.size(), 0.0);
    }
    return c;
}

// little-endian primitives

template <class U>
void put(std::ostream& out, U v) {
    static_assert(std::is_unsigned_v<U>);
    unsigned char buf[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), sizeof(U));
}

template <class U>
U take(std::istream& in) {
    unsigned char buf[sizeof(U)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(U))) {
        throw Error(ErrorKind::CorruptPyramid, "binary pyramid is truncated");
    }
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& out, double v) { put(out, std::bit_cast<std::uint64_t>(v)); }
double take_f64(std::istream& in) { return std::bit_cast<double>(take<std::uint64_t>(in)); }

constexpr char kMagic[8] = {'N', 'L', 'S', 'D', 'P', 'Y', 'R', '1'};

std::uint8_t boundary_code(Boundary b) {
    switch (b) {
        case Boundary::Periodic: return 0;
        case Boundary::ConstantExtend: return 1;
        case Boundary::Shrink: return 2;
    }
    return 0;
}

void put_block(std::ostream& out, const Sequence& s, const std::vector<double>& residuals) {
    put(out, static_cast<std::uint64_t>(s.first_index()));
    put(out, static_cast<std::uint32_t>(s.level()));
    put(out, static_cast<std::uint64_t>(s.size()));
    for (double v : s.values()) put_f64(out, v);
    for (std::size_t k = 0; k < s.size(); ++k) put_f64(out, residuals.empty() ? 0.0 : residuals[k]);
}

std::pair<Sequence, std::vector<double>> take_block(std::istream& in, Boundary b) {
    const auto first = static_cast<std::int64_t>(take<std::uint64_t>(in));
    const auto level = static_cast<std::int32_t>(take<std::uint32_t>(in));
    const auto count = take<std::uint64_t>(in);
    if (count == 0 || count > (std::uint64_t{1} << 40)) {
        throw Error(ErrorKind::CorruptPyramid, "binary pyramid block has an invalid length");
    }
    std::vector<double> values(count);
    std::vector<double> residuals(count);
    for (auto& v : values) v = take_f64(in);
    for (auto& v : residuals) v = take_f64(in);
    try {
        return {Sequence(std::move(values), first, level, b), std::move(residuals)};
    } catch (const Error& e) {
        throw Error(ErrorKind::CorruptPyramid, std::string("binary pyramid block: ") + e.what());
    }
}

void put_channel(std::ostream& out, const Channel& c) {
    put_block(out, c.coarse, {});
    for (std::size_t k = 0; k < c.details.size(); ++k) {
        put_block(out, c.details[k], k < c.residuals.size() ? c.residuals[k] : std::vector<double>{});
    }
}

Channel take_channel(std::istream& in, int levels, Boundary b) {
    Channel c{take_block(in, b).first, {}, {}};
    for (int k = 0; k < levels; ++k) {
        auto [d, r] = take_block(in, b);
        c.details.push_back(std::move(d));
        c.residuals.push_back(std::move(r));
    }
    return c;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string sequence_to_csv(const Sequence& f) {
    std::string out = "abscissa,value\n";
    for (std::size_t k = 0; k < f.size(); ++k) out += format_double(f.abscissa(k)) + ',' + format_double(f[k]) + '\n';
    return out;
}

Sequence sequence_from_csv(const std::string& text, Boundary boundary) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> xs;
    std::vector<double> vs;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) parse_fail("csv row " + std::to_string(row) + " needs two columns");
        const std::string a = line.substr(0, comma);
        const std::string b = line.substr(comma + 1);
        if (xs.empty() && vs.empty() && a.find_first_of("0123456789") == std::string::npos) continue;  // header
        xs.push_back(parse_double(a, row));
        vs.push_back(parse_double(b, row));
    }
    if (vs.empty()) parse_fail("csv holds no samples");
    int level = 0;
    if (xs.size() >= 2) {
        const double h = xs[1] - xs[0];
        int e = 0;
        if (!(h > 0.0) || std::frexp(h, &e) != 0.5 || 1 - e < 0 || 1 - e > 60) {
            parse_fail("csv abscissae must be spaced by 2^-level");
        }
        level = 1 - e;
    }
    const double scaled = std::ldexp(xs[0], level);
    if (scaled != std::floor(scaled) || std::abs(scaled) > 9e15) {
        parse_fail("first abscissa is not on the dyadic grid of level " + std::to_string(level));
    }
    const auto first = static_cast<std::int64_t>(scaled);
    Sequence f(std::move(vs), first, level, boundary);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (xs[k] != f.abscissa(k)) parse_fail("csv row abscissa " + std::to_string(xs[k]) + " is off the grid");
    }
    return f;
}

Json to_json(const Sequence& f) {
    Json j;
    j["level"] = f.level();
    j["first_index"] = f.first_index();
    j["boundary"] = std::string(to_string(f.boundary()));
    j["values"] = f.values();
    return j;
}

Sequence sequence_from_json(const Json& j) {
    const auto boundary = j.contains("boundary") ? parse_boundary(get<std::string>(j, "boundary")) : Boundary::Periodic;
    const int level = j.contains("level") ? get<int>(j, "level") : 0;
    const auto first = j.contains("first_index") ? get<std::int64_t>(j, "first_index") : 0;
    return Sequence(get<std::vector<double>>(j, "values"), first, level, boundary);
}

Json to_json(const SchemeSpec& s) {
    Json j;
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, CenteredLagrange>) {
                j["family"] = "centered_lagrange";
                j["params"] = {{"points", fam.points}};
            } else if constexpr (std::is_same_v<T, UncenteredLagrange>) {
                j["family"] = "uncentered_lagrange";
                j["params"] = {{"points", fam.points}};
            } else if constexpr (std::is_same_v<T, Weno6>) {
                j["family"] = "weno6";
                j["params"] = {{"epsilon", fam.epsilon},
                               {"linear_weights", fam.linear_weights},
                               {"indicator", to_string(fam.indicator)}};
            } else if constexpr (std::is_same_v<T, PowerP>) {
                j["family"] = "power_p";
                j["params"] = {{"p", fam.p}};
            } else {
                j["family"] = "spherical";
                j["params"] = {{"h", fam.h.name}};
            }
        },
        s.family());
    return j;
}

SchemeSpec scheme_from_json(const Json& j) {
    if (j.is_string()) return SchemeSpec::parse(j.get<std::string>());
    const auto family = get<std::string>(j, "family");
    const Json params = j.contains("params") ? j.at("params") : Json::object();
    if (family == "centered_lagrange") return SchemeSpec::centered_lagrange(get<int>(params, "points"));
    if (family == "uncentered_lagrange") return SchemeSpec::uncentered_lagrange(get<int>(params, "points"));
    if (family == "power_p") return SchemeSpec::power_p(get<int>(params, "p"));
    if (family == "spherical") {
        return SchemeSpec::spherical(h_by_name(params.contains("h") ? get<std::string>(params, "h") : "reference"));
    }
    if (family == "weno6") {
        Weno6 w;
        if (params.contains("epsilon")) w.epsilon = get<double>(params, "epsilon");
        if (params.contains("linear_weights")) w.linear_weights = get<std::array<double, 3>>(params, "linear_weights");
        if (params.contains("indicator")) w.indicator = parse_weno_indicator(get<std::string>(params, "indicator"));
        return SchemeSpec::weno6(w);
    }
    parse_fail("unknown scheme family '" + family + "'");
}

Json to_json(const Rational& r) {
    return Json::array({int_json(numerator(r)), int_json(denominator(r))});
}

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (!j.is_array() || j.size() != 2) parse_fail("rational must be [numerator, denominator]");
    const auto den = int_from_json(j[1]);
    if (den == 0) parse_fail("rational with zero denominator");
    return Rational(int_from_json(j[0]), den);
}

Json to_json(const CoeffMask& m) {
    Json out = Json::array();
    const CoeffMask s = m.simplified();
    for (const auto& t : s.terms()) {
        Json term;
        term["op"] = t.order ? Json(t.order->name()) : Json(nullptr);
        term["offset"] = t.offset;
        term["coefficient"] = to_json(t.coefficient);
        out.push_back(term);
    }
    return out;
}

CoeffMask mask_from_json(const Json& j) {
    if (!j.is_array()) parse_fail("coefficient mask must be an array of terms");
    std::vector<MaskTerm> terms;
    for (const auto& t : j) {
        terms.push_back({order_from_json(field(t, "op")), get<int>(t, "offset"),
                         rational_from_json(field(t, "coefficient"))});
    }
    return CoeffMask(std::move(terms));
}

Json to_json(const Pyramid& p) {
    Json j;
    j["scheme"] = to_json(p.scheme);
    j["levels"] = p.levels;
    const Json f = channel_json(p.f);
    for (auto it = f.begin(); it != f.end(); ++it) j[it.key()] = it.value();
    if (p.x) {
        j["x"] = channel_json(*p.x);
        j["x_period"] = p.x_period;
    }
    return j;
}

Pyramid pyramid_from_json(const Json& j) {
    const int levels = get<int>(j, "levels");
    Pyramid p{scheme_from_json(field(j, "scheme")), levels, channel_from_json(j), std::nullopt, 0.0};
    if (j.contains("x")) {
        p.x = channel_from_json(j.at("x"));
        p.x_period = j.contains("x_period") ? get<double>(j, "x_period") : 0.0;
    }
    if (static_cast<int>(p.f.details.size()) != levels || (p.x && static_cast<int>(p.x->details.size()) != levels)) {
        throw Error(ErrorKind::CorruptPyramid, "pyramid declares " + std::to_string(levels) +
                                                   " levels but stores " + std::to_string(p.f.details.size()));
    }
    return p;
}

void write_pyramid_binary(std::ostream& out, const Pyramid& p) {
    out.write(kMagic, sizeof kMagic);
    const std::string scheme = to_json(p.scheme).dump();
    put(out, static_cast<std::uint32_t>(scheme.size()));
    out.write(scheme.data(), static_cast<std::streamsize>(scheme.size()));
    put(out, static_cast<std::uint32_t>(p.levels));
    put(out, boundary_code(p.f.coarse.boundary()));
    put(out, static_cast<std::uint8_t>(p.x ? 1 : 0));
    put_f64(out, p.x_period);
    put_channel(out, p.f);
    if (p.x) put_channel(out, *p.x);
    if (!out) throw Error(ErrorKind::InvalidArgument, "failed to write binary pyramid");
}

Pyramid read_pyramid_binary(std::istream& in) {
    char magic[8];
    if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kMagic)) {
        throw Error(ErrorKind::CorruptPyramid, "not a binary pyramid (bad magic)");
    }
    const auto len = take<std::uint32_t>(in);
    if (len > (1u << 20)) throw Error(ErrorKind::CorruptPyramid, "binary pyramid scheme descriptor is too long");
    std::string scheme(len, '\0');
    if (!in.read(scheme.data(), len)) throw Error(ErrorKind::CorruptPyramid, "binary pyramid is truncated");
    const auto levels = static_cast<int>(take<std::uint32_t>(in));
    const auto code = take<std::uint8_t>(in);
    const auto has_x = take<std::uint8_t>(in);
    if (code > 2 || has_x > 1 || levels > 62) throw Error(ErrorKind::CorruptPyramid, "binary pyramid header is invalid");
    const Boundary b = code == 0 ? Boundary::Periodic : code == 1 ? Boundary::ConstantExtend : Boundary::Shrink;
    const double period = take_f64(in);
    Json sj;
    try {
        sj = Json::parse(scheme);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::CorruptPyramid, std::string("binary pyramid scheme descriptor: ") + e.what());
    }
    Pyramid p{scheme_from_json(sj), levels, take_channel(in, levels, b), std::nullopt, period};
    if (has_x) p.x = take_channel(in, levels, b);
    return p;
}

Json to_json(const ContractionReport& r) {
    Json j;
    j["scheme"] = r.scheme;
    j["delta"] = r.delta.name();
    j["steps"] = r.steps;
    j["c_estimate"] = r.c_estimate;
    if (r.exact) {
        j["exact"] = to_json(*r.exact);
        j["exact_value"] = to_double(*r.exact);
    } else {
        j["exact"] = nullptr;
    }
    j["trials"] = r.trials;
    j["skipped"] = r.skipped;
    j["seed"] = r.seed;
    return j;
}

Json to_json(const RegularityReport& r) {
    Json j;
    j["scheme"] = r.scheme;
    j["beta_estimate"] = r.beta_estimate;
    j["fit_levels"] = {r.fit_levels.first, r.fit_levels.second};
    j["slope"] = r.slope;
    j["intercept"] = r.intercept;
    j["residual"] = r.residual;
    j["diff_norms"] = r.diff_norms;
    return j;
}

Json to_json(const SpectralReport& r) {
    Json j;
    j["scheme"] = r.scheme;
    j["order"] = r.order.name();
    Json mask;
    mask["lowest_power"] = r.mask.lowest_power;
    mask["coefficients"] = Json::array();
    for (const auto& c : r.mask.coefficients) mask["coefficients"].push_back(to_string(c));
    j["difference_mask"] = mask;
    j["matrix_size"] = r.matrices[0].rows();
    j["single_radii"] = r.single_radii;
    j["rho"] = r.rho;
    j["iterations"] = r.iterations;
    j["joint_norm_bound"] = r.joint_norm_bound;
    j["eig_depth"] = r.eig_depth;
    j["norm_depth"] = r.norm_depth;
    return j;
}

Json to_json(const StabilityReport& r) {
    Json j;
    j["ratio_s1"] = r.ratio_s1;
    j["ratio_s2"] = r.ratio_s2;
    j["ratio_s3"] = r.ratio_s3;
    j["max_fine_deviation"] = r.max_fine_deviation;
    j["max_detail_deviation"] = r.max_detail_deviation;
    j["perturbation_scale"] = r.perturbation_scale;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    return j;
}

Json to_json(const Figure1Result& r) {
    Json j;
    j["points"] = r.points;
    std::vector<int> levels;
    for (const auto& s : r.levels) levels.push_back(s.level());
    j["levels"] = levels;
    j["diff_norms"] = r.diff_norms;
    j["sup_norm"] = r.sup_norm;
    j["growth_factor"] = r.growth_factor;
    return j;
}

Json error_record(const Error& e) {
    return Json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
}

}  // namespace nlsd::io
