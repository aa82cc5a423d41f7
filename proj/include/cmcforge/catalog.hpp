#pragma once

#include <string>
#include <vector>

#include "cmcforge/wdata.hpp"
#include "json.hpp"

namespace cmcforge {

struct UnknownSurface : std::invalid_argument { using std::invalid_argument::invalid_argument; };

enum class Solid { Tetrahedron, Octahedron, Cube, Icosahedron, Dodecahedron };

WeierstrassData catenoid();
WeierstrassData enneper();
WeierstrassData noid(int n);
// Genus zero surface with one catenoid end at each vertex of the solid.
WeierstrassData platonic(Solid s);
// G = z^3, q = z^2/(z^4 - 2cos(2 phi) z^2 + 1)^2; four ends at +-e^{+-i phi}.
// Period of the (3,2) loop vanishes at phi = pi/4.
WeierstrassData synthetic(double phi);

// catenoid | enneper | trinoid | noid(n) | platonic(kind) | tetrahedron ... | synthetic(phi)
WeierstrassData catalog(const std::string& name);
std::vector<std::string> catalog_names();

// (m, n) of a platonic solid: vertex degree and face size.
std::pair<int, int> solid_mn(Solid s);
Solid solid_from_name(const std::string& name);

nlohmann::json cplx_json(cplx z);
cplx json_cplx(const nlohmann::json& j);
nlohmann::json mat_json(const Mat2C& a);
Mat2C json_mat(const nlohmann::json& j);

nlohmann::json to_json(const WeierstrassData& d);
WeierstrassData from_json(const nlohmann::json& j);

} // namespace cmcforge
