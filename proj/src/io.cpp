#include "helmdual/io.hpp"
#include "helmdual/numeric.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace helmdual::io {

namespace {

// Minimal SHA-256 (FIPS 180-4), enough for manifest file inventories.
struct Sha256 {
    std::array<std::uint32_t, 8> h{0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                   0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::array<std::uint8_t, 64> buf{};
    std::uint64_t total = 0;
    std::size_t fill = 0;

    static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void block(const std::uint8_t* p) {
        static constexpr std::uint32_t K[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
            0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
            0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
            0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
            0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
            0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
            0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
            0xc67178f2};
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        auto a = h;
        for (int i = 0; i < 64; ++i) {
            const std::uint32_t S1 = rotr(a[4], 6) ^ rotr(a[4], 11) ^ rotr(a[4], 25);
            const std::uint32_t ch = (a[4] & a[5]) ^ (~a[4] & a[6]);
            const std::uint32_t t1 = a[7] + S1 + ch + K[i] + w[i];
            const std::uint32_t S0 = rotr(a[0], 2) ^ rotr(a[0], 13) ^ rotr(a[0], 22);
            const std::uint32_t mj = (a[0] & a[1]) ^ (a[0] & a[2]) ^ (a[1] & a[2]);
            const std::uint32_t t2 = S0 + mj;
            a[7] = a[6]; a[6] = a[5]; a[5] = a[4]; a[4] = a[3] + t1;
            a[3] = a[2]; a[2] = a[1]; a[1] = a[0]; a[0] = t1 + t2;
        }
        for (int i = 0; i < 8; ++i) h[i] += a[i];
    }

    void update(const void* data, std::size_t len) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        total += len;
        while (len > 0) {
            const std::size_t take = std::min(len, buf.size() - fill);
            std::memcpy(buf.data() + fill, p, take);
            fill += take;
            p += take;
            len -= take;
            if (fill == buf.size()) {
                block(buf.data());
                fill = 0;
            }
        }
    }

    std::string hex_digest() {
        const std::uint64_t bits = total * 8;
        const std::uint8_t one = 0x80;
        update(&one, 1);
        const std::uint8_t zero = 0;
        while (fill != 56) update(&zero, 1);
        std::uint8_t lenb[8];
        for (int i = 0; i < 8; ++i) lenb[i] = std::uint8_t(bits >> (56 - 8 * i));
        update(lenb, 8);
        std::ostringstream os;
        os << std::hex << std::setfill('0');
        for (std::uint32_t v : h) os << std::setw(8) << v;
        return os.str();
    }
};

void write_bytes(const std::filesystem::path& path, const void* data, std::size_t len) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open for writing: " + path.string());
    f.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!f)
        throw IoError("short write: " + path.string());
}

} // namespace

void dump_field(const ScalarField& f, const std::filesystem::path& path, const std::string& role) {
    static_assert(std::endian::native == std::endian::little,
                  "field dump format is little-endian");
    write_bytes(path, f.values().data(), f.values().size() * sizeof(double));
    json meta{{"dimension", f.grid().dim},
              {"half_width", f.grid().half_width},
              {"samples_per_axis", f.grid().samples},
              {"role", role}};
    write_json_atomic(meta, path.string() + ".json");
}

ScalarField load_field(const std::filesystem::path& path) {
    std::ifstream meta_f(path.string() + ".json");
    if (!meta_f)
        throw IoError("missing field sidecar: " + path.string() + ".json");
    json meta = json::parse(meta_f);
    Grid g = make_grid(meta.at("dimension").get<int>(), meta.at("half_width").get<double>(),
                       meta.at("samples_per_axis").get<int>());
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open field dump: " + path.string());
    std::vector<double> vals(g.cell_count());
    f.read(reinterpret_cast<char*>(vals.data()),
           static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (static_cast<std::size_t>(f.gcount()) != vals.size() * sizeof(double))
        throw IoError("field dump truncated: " + path.string());
    return ScalarField(g, std::move(vals));
}

std::string sha256_bytes(const void* data, std::size_t len) {
    Sha256 s;
    s.update(data, len);
    return s.hex_digest();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open for hashing: " + path.string());
    Sha256 s;
    char buf[65536];
    while (f) {
        f.read(buf, sizeof(buf));
        s.update(buf, static_cast<std::size_t>(f.gcount()));
    }
    return s.hex_digest();
}

json to_json(const BoundReport& rep) {
    return json{{"dimension", rep.dim},
                {"half_width", rep.half_width},
                {"samples_per_axis", rep.samples},
                {"delta", rep.delta},
                {"annulus_mode_count", rep.annulus_mode_count},
                {"c_phi1", rep.c_phi1},
                {"c_phi2", rep.c_phi2}};
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot open for writing: " + path.string());
    f << text;
}

} // namespace

void write_sweep_summary(const ConcentrationReport& rep, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "eps,c_eps,c_M,bary_psi_x,bary_psi_y,bary_psi_z,bary_phi_x,bary_phi_y,bary_phi_z,"
          "profile_distance_u,profile_distance_v,iterations,converged,distinct_solutions\n";
    for (const auto& r : rep.entries) {
        os << fmt(r.eps) << ',' << fmt(r.c_eps) << ',' << fmt(rep.c_M);
        for (int d = 0; d < 3; ++d)
            os << ',' << (d < static_cast<int>(r.barycenter_psi.size()) ? fmt(r.barycenter_psi[d]) : "");
        for (int d = 0; d < 3; ++d)
            os << ',' << (d < static_cast<int>(r.barycenter_phi.size()) ? fmt(r.barycenter_phi[d]) : "");
        os << ',' << fmt(r.profile_distance_u) << ',' << fmt(r.profile_distance_v) << ','
           << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << r.distinct_solutions << '\n';
    }
    write_text(path, os.str());
}

void write_energy_csv(const ConcentrationReport& rep, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "eps,c_eps,c_M\n";
    for (const auto& r : rep.entries)
        os << fmt(r.eps) << ',' << fmt(r.c_eps) << ',' << fmt(rep.c_M) << '\n';
    write_text(path, os.str());
}

void write_barycenter_csv(const ConcentrationReport& rep, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "eps,bary_psi_x,bary_psi_y,bary_psi_z,bary_phi_x,bary_phi_y,bary_phi_z\n";
    for (const auto& r : rep.entries) {
        os << fmt(r.eps);
        for (int d = 0; d < 3; ++d)
            os << ',' << (d < static_cast<int>(r.barycenter_psi.size()) ? fmt(r.barycenter_psi[d]) : "");
        for (int d = 0; d < 3; ++d)
            os << ',' << (d < static_cast<int>(r.barycenter_phi.size()) ? fmt(r.barycenter_phi[d]) : "");
        os << '\n';
    }
    write_text(path, os.str());
}

void write_radial_profile_csv(const ConcentrationReport& rep, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "r,shell_avg_abs_u,shell_avg_abs_u_limit\n";
    if (!rep.finest || !rep.limit) {
        write_text(path, os.str());
        return;
    }
    const ScalarField& u = rep.finest->primal.u;
    const ScalarField& ul = rep.limit->primal.u;
    const Grid& g = u.grid();
    const double h = g.spacing();
    const int nbins = g.samples / 2;
    std::vector<double> sum(nbins, 0.0), suml(nbins, 0.0);
    std::vector<long> count(nbins, 0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto pt = u.point(i);
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) r2 += pt[d] * pt[d];
        const int bin = static_cast<int>(std::sqrt(r2) / h);
        if (bin < nbins) {
            sum[bin] += std::abs(u[i]);
            suml[bin] += std::abs(ul[i]);
            ++count[bin];
        }
    }
    for (int b = 0; b < nbins; ++b)
        if (count[b] > 0)
            os << fmt((b + 0.5) * h) << ',' << fmt(sum[b] / count[b]) << ','
               << fmt(suml[b] / count[b]) << '\n';
    write_text(path, os.str());
}

void write_json_atomic(const json& j, const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp);
        if (!f)
            throw IoError("cannot open for writing: " + tmp.string());
        f << j.dump(2) << '\n';
        if (!f)
            throw IoError("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace helmdual::io
