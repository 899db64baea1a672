#pragma once

#include "sectorium/algebra.hpp"
#include "sectorium/cover.hpp"
#include "sectorium/error.hpp"
#include "sectorium/fixtures.hpp"
#include "sectorium/group.hpp"
#include "sectorium/json_io.hpp"
#include "sectorium/linalg.hpp"
#include "sectorium/rep.hpp"
#include "sectorium/rotor.hpp"
#include "sectorium/toy_model.hpp"
