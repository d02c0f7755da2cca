#pragma once

// Umbrella header: exact parabolic cohomology of local systems on the
// punctured sphere, braid monodromy, cup-product lattices, middle
// convolution of elliptic-surface homological invariants, and
// transcendental-lattice extraction.

#include "parcohom/analysis.hpp"
#include "parcohom/braid.hpp"
#include "parcohom/convolution.hpp"
#include "parcohom/cup.hpp"
#include "parcohom/forms.hpp"
#include "parcohom/integers.hpp"
#include "parcohom/json_io.hpp"
#include "parcohom/kodaira.hpp"
#include "parcohom/lattice.hpp"
#include "parcohom/local_system.hpp"
#include "parcohom/matrix.hpp"
#include "parcohom/normal_form.hpp"
#include "parcohom/version.hpp"
