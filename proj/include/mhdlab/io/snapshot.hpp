// snapshot.hpp: binary field snapshots.
//
// Layout, all little-endian:
//   "MHDS1"           5 bytes
//   D, N              uint32 each
//   L, t              float64 each
//   roles             uint32 bitmask, 1 = U, 2 = B, 4 = pressure
//   config length     uint64, then that many bytes of config text
//   per present role, in order U, B, pressure: D (or 1) arrays of N^D float64
//   samples in grid storage order.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mhdlab/field.hpp"

namespace mhdlab {

struct Snapshot {
    Grid grid;
    double t = 0.0;
    std::optional<VectorField> u;
    std::optional<VectorField> b;
    std::optional<ScalarField> pressure;
    std::string config;
};

namespace detail {

inline constexpr char kSnapshotMagic[5] = {'M', 'H', 'D', 'S', '1'};

template <class T>
void put_le(std::ostream& os, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_le(std::istream& is, const char* what) {
    unsigned char buf[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(buf), sizeof(T)))
        throw SnapshotError(std::string("snapshot truncated while reading ") + what);
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

inline void put_scalar(std::ostream& os, const ScalarField& f) {
    for (double v : f.values()) put_le(os, v);
}

inline ScalarField get_scalar(std::istream& is, const Grid& g, const char* what) {
    std::vector<double> v(g.size());
    for (auto& x : v) x = get_le<double>(is, what);
    return ScalarField::from_values(g, std::move(v));
}

} // namespace detail

inline void write_snapshot(std::ostream& os, const Snapshot& s) {
    const Grid& g = s.grid;
    if (s.u) require_same_grid(g, s.u->grid(), "write_snapshot");
    if (s.b) require_same_grid(g, s.b->grid(), "write_snapshot");
    if (s.pressure) require_same_grid(g, s.pressure->grid(), "write_snapshot");
    os.write(detail::kSnapshotMagic, 5);
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.n()));
    detail::put_le<double>(os, g.length());
    detail::put_le<double>(os, s.t);
    const std::uint32_t roles = (s.u ? 1u : 0u) | (s.b ? 2u : 0u) | (s.pressure ? 4u : 0u);
    detail::put_le<std::uint32_t>(os, roles);
    detail::put_le<std::uint64_t>(os, s.config.size());
    os.write(s.config.data(), static_cast<std::streamsize>(s.config.size()));
    for (const auto* f : {&s.u, &s.b})
        if (*f)
            for (int a = 0; a < g.dim(); ++a) detail::put_scalar(os, (**f)[a]);
    if (s.pressure) detail::put_scalar(os, *s.pressure);
    if (!os) throw SnapshotError("snapshot write failed");
}

inline Snapshot read_snapshot(std::istream& is) {
    char magic[5];
    if (!is.read(magic, 5)) throw SnapshotError("snapshot truncated while reading magic");
    if (std::memcmp(magic, detail::kSnapshotMagic, 5) != 0) throw SnapshotError("not a snapshot: bad magic");
    const auto dim = detail::get_le<std::uint32_t>(is, "dimension");
    const auto n = detail::get_le<std::uint32_t>(is, "grid size");
    const auto len = detail::get_le<double>(is, "box length");
    const auto t = detail::get_le<double>(is, "time");
    const auto roles = detail::get_le<std::uint32_t>(is, "roles");
    if (roles > 7u) throw SnapshotError("snapshot roles bitmask has unknown bits");
    std::optional<Grid> g;
    try {
        g.emplace(static_cast<int>(dim), static_cast<int>(n), len);
    } catch (const ParameterError& e) {
        throw SnapshotError(std::string("snapshot header: ") + e.what());
    }
    const auto clen = detail::get_le<std::uint64_t>(is, "config length");
    if (clen > (std::uint64_t{1} << 32)) throw SnapshotError("snapshot config length is implausible");
    std::string config(clen, '\0');
    if (clen > 0 && !is.read(config.data(), static_cast<std::streamsize>(clen)))
        throw SnapshotError("snapshot truncated while reading config text");

    Snapshot s{*g, t, std::nullopt, std::nullopt, std::nullopt, std::move(config)};
    const auto read_vector = [&](const char* what) {
        std::vector<ScalarField> comps;
        for (int a = 0; a < g->dim(); ++a) comps.push_back(detail::get_scalar(is, *g, what));
        return VectorField(std::move(comps), false);
    };
    if (roles & 1u) s.u = read_vector("U samples");
    if (roles & 2u) s.b = read_vector("B samples");
    if (roles & 4u) s.pressure = detail::get_scalar(is, *g, "pressure samples");
    return s;
}

inline void write_snapshot_file(const std::string& path, const Snapshot& s) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw SnapshotError("cannot open " + path + " for writing");
    write_snapshot(os, s);
}

inline Snapshot read_snapshot_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw SnapshotError("cannot open " + path);
    return read_snapshot(is);
}

} // namespace mhdlab
