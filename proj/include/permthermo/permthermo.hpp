// Convenience header pulling in the whole numerical library (not the CLI).
#pragma once

#include "permthermo/asymptotics.hpp"
#include "permthermo/characters.hpp"
#include "permthermo/ensemble.hpp"
#include "permthermo/lindblad.hpp"
#include "permthermo/otto.hpp"
#include "permthermo/partitions.hpp"
#include "permthermo/su_cartan.hpp"
#include "permthermo/thermo.hpp"
