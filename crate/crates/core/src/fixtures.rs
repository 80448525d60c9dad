//! Synthetic tourism data around La Rochelle, plus the small hand-written
//! dialect fixtures and example queries shipped with the crate.
//!
//! The generated dataset is a pure function of the seed.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 17;

/// Town-centre reference point (Vieux-Port).
pub const LA_ROCHELLE: (f64, f64) = (46.1591, -1.1520);

/// Distance threshold used by the example ranking query, in meters.
pub const NEARBY_THRESHOLD_M: f64 = 1000.0;

/// One hotel in canonical tags.
pub const HOTEL_V3: &str = include_str!("../fixtures/fixture_v3.xml");
/// The same hotel in a flattened, French-tagged dialect. Same logical content.
pub const HOTEL_DIALECT_A: &str = include_str!("../fixtures/fixture_dialect_a.xml");
/// The same hotel in a wrapper-based, Latin-1 encoded dialect with one extra tag.
pub const HOTEL_DIALECT_B: &[u8] = include_bytes!("../fixtures/fixture_dialect_b.xml");
pub const PROFILE_A: &str = include_str!("../profiles/dialect_a.json");
pub const PROFILE_B: &str = include_str!("../profiles/dialect_b.json");

/// Hotels ranked by the number of restaurants, bars and events nearby.
pub const EXAMPLE1_QUERY: &str = include_str!("../queries/example1.rq");
/// Rural events with their audience information.
pub const EXAMPLE2_QUERY: &str = include_str!("../queries/example2.rq");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureConfig {
    pub seed: u64,
    pub hotels: usize,
    pub restaurants: usize,
    pub bars: usize,
    pub events: usize,
}

impl Default for FixtureConfig {
    fn default() -> Self {
        FixtureConfig {
            seed: DEFAULT_SEED,
            hotels: 6,
            restaurants: 8,
            bars: 5,
            events: 8,
        }
    }
}

const STREETS: &[&str] = &[
    "Quai Duperré",
    "Rue du Palais",
    "Rue Saint-Nicolas",
    "Cours des Dames",
    "Rue Chaudrier",
    "Avenue du Général de Gaulle",
    "Rue des Merciers",
    "Quai Valin",
    "Rue Gargoulleau",
    "Place de Verdun",
];

const VILLAGES: &[(&str, &str)] = &[
    ("Marans", "17230"),
    ("Surgères", "17700"),
    ("Aigrefeuille-d'Aunis", "17290"),
    ("Courçon", "17170"),
    ("Ardillières", "17290"),
];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn round5(x: f64) -> f64 {
    (x * 1e5).round() / 1e5
}

struct Writer {
    out: String,
}

impl Writer {
    fn open(&mut self, depth: usize, tag: &str) {
        let _ = writeln!(self.out, "{}<{tag}>", "  ".repeat(depth));
    }

    fn close(&mut self, depth: usize, tag: &str) {
        let _ = writeln!(self.out, "{}</{tag}>", "  ".repeat(depth));
    }

    fn leaf(&mut self, depth: usize, tag: &str, value: &str) {
        let _ = writeln!(self.out, "{}<{tag}>{}</{tag}>", "  ".repeat(depth), esc(value));
    }

    fn geolocation(&mut self, street: &str, postal: &str, city: &str, lat: f64, lon: f64) {
        self.open(2, "Geolocation");
        self.leaf(3, "AddressLine1", street);
        self.leaf(3, "PostalCode", postal);
        self.leaf(3, "City", city);
        self.leaf(3, "Latitude", &crate::graph::format_decimal(lat));
        self.leaf(3, "Longitude", &crate::graph::format_decimal(lon));
        self.close(2, "Geolocation");
    }
}

/// Canonical TIF XML for the synthetic La Rochelle dataset.
pub fn larochelle_xml(config: &FixtureConfig) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut w = Writer {
        out: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<TIF version=\"3.0\">\n"),
    };
    let (lat0, lon0) = LA_ROCHELLE;
    let near = |rng: &mut ChaCha8Rng, spread: f64| {
        (
            round5(lat0 + rng.random_range(-spread..spread)),
            round5(lon0 + rng.random_range(-spread * 1.4..spread * 1.4)),
        )
    };

    for i in 1..=config.hotels {
        let (lat, lon) = near(&mut rng, 0.012);
        let street = STREETS[rng.random_range(0..STREETS.len())];
        w.open(1, "Resource");
        w.leaf(2, "Identifier", &format!("HOT-{i:03}"));
        w.leaf(2, "Category", "Hotel");
        w.open(2, "DublinCore");
        w.leaf(3, "Title", &format!("Hôtel de la Rade {i}"));
        w.close(2, "DublinCore");
        w.geolocation(
            &format!("{} {}", rng.random_range(1..80), street),
            "17000",
            "La Rochelle",
            lat,
            lon,
        );
        w.open(2, "Classification");
        w.leaf(3, "Scheme", "Atout France");
        w.leaf(3, "Stars", &rng.random_range(1..=5).to_string());
        w.close(2, "Classification");
        w.open(2, "Price");
        w.leaf(3, "Amount", &format!("{}", rng.random_range(55..240)));
        w.leaf(3, "Currency", "EUR");
        w.close(2, "Price");
        w.open(2, "ReservationMode");
        w.leaf(3, "Channel", "online");
        w.leaf(3, "Required", "false");
        w.close(2, "ReservationMode");
        w.close(1, "Resource");
    }

    let amenities = [
        ("RES", "Restaurant", "Restaurant", config.restaurants),
        ("BAR", "BarOrPub", "Bar", config.bars),
    ];
    for (prefix, category, label, count) in amenities {
        for i in 1..=count {
            let (lat, lon) = near(&mut rng, 0.02);
            let street = STREETS[rng.random_range(0..STREETS.len())];
            w.open(1, "Resource");
            w.leaf(2, "Identifier", &format!("{prefix}-{i:03}"));
            w.leaf(2, "Category", category);
            w.open(2, "DublinCore");
            w.leaf(3, "Title", &format!("{label} du Port {i}"));
            w.close(2, "DublinCore");
            w.geolocation(
                &format!("{} {}", rng.random_range(1..80), street),
                "17000",
                "La Rochelle",
                lat,
                lon,
            );
            w.close(1, "Resource");
        }
    }

    for i in 1..=config.events {
        // every other event takes place in a nearby village
        let rural = i % 2 == 0;
        let (lat, lon, city, postal, street) = if rural {
            let (village, postal) = VILLAGES[rng.random_range(0..VILLAGES.len())];
            let (lat, lon) = near(&mut rng, 0.15);
            (lat, lon, village, postal, "Place de l'Église".to_owned())
        } else {
            let (lat, lon) = near(&mut rng, 0.02);
            let street = STREETS[rng.random_range(0..STREETS.len())];
            (lat, lon, "La Rochelle", "17000", street.to_owned())
        };
        let day = rng.random_range(1..=28);
        w.open(1, "Resource");
        w.leaf(2, "Identifier", &format!("EVT-{i:03}"));
        w.leaf(2, "Category", "Event");
        w.open(2, "DublinCore");
        w.leaf(
            3,
            "Title",
            &if rural {
                format!("Fête de village {i}")
            } else {
                format!("Festival du Vieux-Port {i}")
            },
        );
        w.close(2, "DublinCore");
        w.geolocation(&street, postal, city, lat, lon);
        w.open(2, "Customer");
        w.leaf(3, "Audience", if rural { "rural" } else { "urban" });
        w.leaf(
            3,
            "Public",
            ["families", "seniors", "young adults", "all audiences"][rng.random_range(0..4)],
        );
        w.close(2, "Customer");
        w.open(2, "Period");
        w.leaf(3, "PeriodType", "opening");
        w.leaf(3, "Start", &format!("2024-07-{day:02}"));
        w.leaf(3, "End", &format!("2024-07-{:02}", day + 1));
        w.close(2, "Period");
        w.close(1, "Resource");
    }
    w.out.push_str("</TIF>\n");
    w.out
}

/// Example-1 query text with a different distance threshold.
pub fn example1_query_with_threshold(threshold_m: f64) -> String {
    EXAMPLE1_QUERY.replace(
        &format!("< {}", NEARBY_THRESHOLD_M as u64),
        &format!("< {}", crate::graph::format_decimal(threshold_m)),
    )
}
