#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "wplab/equivariant_map.hpp"
#include "wplab/mesh.hpp"
#include "wplab/variation.hpp"

namespace wplab {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double x);

/// Inverse of format_double; throws std::runtime_error on garbage.
double parse_double(const std::string& s);

/// Line-oriented interchange form of a triangulated domain (format
/// WPLAB-MESH v1): vertex chart positions, face corner triples, the
/// fundamental-polygon side pairings and the group generators.
struct MeshFile {
    struct Pairing {
        int side = 0;
        int partner = 0;
        complex alpha, beta;  ///< Moebius coefficients of the pairing map
    };
    std::vector<complex> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<Pairing> pairings;
    std::vector<Moebius> generators;
};

MeshFile mesh_file_from(const TriangulatedDomain& dom);
void write_mesh(std::ostream& out, const MeshFile& mesh);
/// Throws std::runtime_error naming the offending line on malformed input.
MeshFile read_mesh(std::istream& in);

/// Map checkpoint (format WPLAB-MAP v1): generator images of the
/// homomorphism followed by the per-orbit target values. Values are
/// written gauge-free (the lift choice folded in), so write/read
/// round-trips the map's corner values bit-exactly.
struct MapFile {
    std::vector<Moebius> phi;
    std::vector<complex> values;  ///< indexed by orbit id
};

MapFile map_file_from(const EquivariantMap& map);
void write_map(std::ostream& out, const MapFile& mf);
MapFile read_map(std::istream& in);

/// Rebuild an equivariant map from a checkpoint over known domain/target.
EquivariantMap map_from_file(const MapFile& mf,
                             std::shared_ptr<const TriangulatedDomain> domain,
                             std::shared_ptr<const FuchsianSurface> target);

/// CSV emission: `t,energy,grad_norm` rows of an energy sweep.
void write_curve_csv(std::ostream& out, const EnergyCurve& curve);

/// CSV emission: `mu_id,fd1,formula1,fd2,formula2,wp4,hproj4` rows.
void write_derivs_csv(std::ostream& out, const std::vector<MuReport>& rows);

/// Certificate as `key: value` lines, with the generating config embedded
/// so every reported number is re-derivable.
void write_report(std::ostream& out, const CertificationReport& rep,
                  const std::string& config_text);

}  // namespace wplab
