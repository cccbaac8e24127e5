#pragma once

#include "qrep/exactla.hpp"
#include "qrep/errors.hpp"
#include "qrep/algebra.hpp"
#include "qrep/module.hpp"
#include "qrep/universe.hpp"
#include "qrep/subcat.hpp"
#include "qrep/recollement.hpp"
#include "qrep/enumerate.hpp"
#include "qrep/io.hpp"
