#pragma once

#include <json.hpp>
#include <string>

#include "kummer/cyclic_cohomology.hpp"
#include "kummer/errors.hpp"
#include "kummer/kummer_tower.hpp"

namespace kummer::json_io {

using Json = nlohmann::json;

/// Schema violation at a field path such as "$.levels[2].f.matrix".
class SchemaError : public InputError {
 public:
  SchemaError(std::string path, const std::string& what);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Integers are written as decimal strings. Readers also accept JSON numbers, matrices as
// nested row arrays, and groups given as {"orders": [...]}.
Json encode(const Integer& x);
Json encode(const IntMatrix& m);
Json encode(const FgAbGroup& g);
Json encode(const GroupElement& x);
Json encode(const Homomorphism& h);
Json encode(const ShortExactSequence& seq);
Json encode(const KummerTower& t);
Json encode(const CoKummerTower& t);
Json encode(const CyclicGroupModule& m);
Json encode(const TowerReport& r);
Json encode_factors(const std::vector<Integer>& v);

Integer decode_integer(const Json& j, const std::string& path = "$");
IntMatrix decode_matrix(const Json& j, const std::string& path = "$");
FgAbGroup decode_group(const Json& j, const std::string& path = "$");
GroupElement decode_element(const Json& j, const FgAbGroup& parent, const std::string& path = "$");
Homomorphism decode_hom(const Json& j, const std::string& path = "$");
// The hom's matrix may also be given alone when source and target are known.
Homomorphism decode_hom(const Json& j, const FgAbGroup& source, const FgAbGroup& target, const std::string& path);
ShortExactSequence decode_sequence(const Json& j, const std::string& path = "$");
// Returns true for {"kind": "cokummer"}; fills exactly one of the towers.
bool decode_tower(const Json& j, KummerTower& kummer, CoKummerTower& cokummer, const std::string& path = "$");
SigmaModel decode_sigma(const Json& j, const std::string& path = "$");
CyclicGroupModule decode_gmodule(const Json& j, const std::string& path = "$");
// {"p":..., "modules":[A, B, C], "f": hom, "g": hom}
GModuleSequence decode_gmodule_sequence(const Json& j, Integer& p, const std::string& path = "$");

const Json& field(const Json& j, const std::string& key, const std::string& path);
std::size_t decode_size(const Json& j, const std::string& path);

}  // namespace kummer::json_io
