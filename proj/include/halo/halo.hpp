#pragma once

#include "halo/rdf.hpp"
#include "halo/turtle.hpp"
#include "halo/schema.hpp"
#include "halo/ingest.hpp"
#include "halo/sparql.hpp"
#include "halo/validator.hpp"
#include "halo/analytics.hpp"
#include "halo/fixture.hpp"
