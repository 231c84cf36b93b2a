//! Deterministic corpus generation for tests and benchmarks.
//!
//! Sources are built from a fixed API pool with a seeded xorshift generator,
//! so the same spec always yields byte-identical files.

/// Small deterministic RNG; not for anything but test-data generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeterministicRng {
    state: u64,
}

impl DeterministicRng {
    pub fn seeded(seed: u64) -> DeterministicRng {
        DeterministicRng { state: if seed == 0 { 0x9E37_79B9_7F4A_7C15 } else { seed } }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    /// Uniform-ish value in `0..bound`; `bound` must be non-zero.
    pub fn next_below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.next_below(items.len())]
    }

    /// True with probability `num/den`.
    pub fn chance(&mut self, num: usize, den: usize) -> bool {
        self.next_below(den) < num
    }
}

/// One API class the generator can draw calls from.
struct ApiClass {
    qualified: &'static str,
    simple: &'static str,
    field: &'static str,
    opener: &'static str,
    middle: &'static [&'static str],
    closer: &'static str,
}

const API_POOL: &[ApiClass] = &[
    ApiClass {
        qualified: "java.sql.Connection",
        simple: "Connection",
        field: "conn",
        opener: "open",
        middle: &["query", "prepare", "commit", "rollback"],
        closer: "close",
    },
    ApiClass {
        qualified: "java.net.Socket",
        simple: "Socket",
        field: "sock",
        opener: "connect",
        middle: &["send", "receive", "flush"],
        closer: "close",
    },
    ApiClass {
        qualified: "java.io.FileWriter",
        simple: "FileWriter",
        field: "writer",
        opener: "append",
        middle: &["write", "flush"],
        closer: "close",
    },
    ApiClass {
        qualified: "java.util.Scanner",
        simple: "Scanner",
        field: "scanner",
        opener: "nextLine",
        middle: &["next", "nextInt", "hasNext"],
        closer: "reset",
    },
    ApiClass {
        qualified: "java.nio.Buffer",
        simple: "Buffer",
        field: "buf",
        opener: "allocate",
        middle: &["put", "get", "mark"],
        closer: "clear",
    },
    ApiClass {
        qualified: "java.util.Timer",
        simple: "Timer",
        field: "timer",
        opener: "schedule",
        middle: &["purge", "delay"],
        closer: "cancel",
    },
];

/// Shape of a generated corpus.
#[derive(Debug, Clone, Copy)]
pub struct CorpusSpec {
    pub files: usize,
    pub methods_per_file: usize,
    pub seed: u64,
}

/// Generates `(relative_filename, source_text)` pairs. Openers appear only in
/// idiom-shaped methods (about one in four), so a query like
/// `Connection.open` matches a modest, predictable slice of the corpus.
pub fn generate_corpus(spec: &CorpusSpec) -> Vec<(String, String)> {
    let mut rng = DeterministicRng::seeded(spec.seed);
    (0..spec.files)
        .map(|n| {
            let name = format!("gen/Client{n:05}.java");
            let source = generate_file(n, spec.methods_per_file, &mut rng);
            (name, source)
        })
        .collect()
}

fn generate_file(index: usize, methods: usize, rng: &mut DeterministicRng) -> String {
    // Two or three classes per file keeps the import table and field set small.
    let target = 2 + rng.next_below(2);
    let mut class_indices: Vec<usize> = Vec::new();
    while class_indices.len() < target {
        let candidate = rng.next_below(API_POOL.len());
        if !class_indices.contains(&candidate) {
            class_indices.push(candidate);
        }
    }
    class_indices.sort_unstable();

    let mut src = String::new();
    src.push_str(&format!("package gen.p{};\n\n", index % 97));
    for &ci in &class_indices {
        src.push_str(&format!("import {};\n", API_POOL[ci].qualified));
    }
    src.push_str(&format!("\nclass Client{index:05} {{\n"));
    for &ci in &class_indices {
        let api = &API_POOL[ci];
        src.push_str(&format!("    {} {};\n", api.simple, api.field));
    }
    for m in 0..methods {
        let api = &API_POOL[class_indices[rng.next_below(class_indices.len())]];
        src.push_str(&format!("\n    void step{m}() {{\n"));
        if rng.chance(1, 4) {
            // The canonical idiom: opener, optional middles, closer.
            src.push_str(&format!("        {}.{}();\n", api.field, api.opener));
            for _ in 0..rng.next_below(3) {
                src.push_str(&format!("        {}.{}();\n", api.field, rng.pick(api.middle)));
            }
            src.push_str(&format!("        {}.{}();\n", api.field, api.closer));
        } else {
            // Free-form maintenance calls, never the opener.
            for _ in 0..2 + rng.next_below(4) {
                let name = if rng.chance(1, 4) { api.closer } else { rng.pick(api.middle) };
                src.push_str(&format!("        {}.{}();\n", api.field, name));
            }
        }
        src.push_str("    }\n");
    }
    src.push_str("}\n");
    src
}
