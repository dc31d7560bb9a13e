use std::fmt::Write;

/// Plain-text report with a fixed section order.
#[derive(Debug, Default)]
pub struct Report {
    pub subcommand: String,
    pub inputs: Vec<(String, String)>,
    pub result: Vec<String>,
    pub frontier: String,
    pub checks: Vec<(String, bool)>,
}

impl Report {
    pub fn new(subcommand: &str) -> Self {
        Report { subcommand: subcommand.into(), ..Default::default() }
    }

    pub fn input(&mut self, key: &str, value: impl Into<String>) {
        self.inputs.push((key.into(), value.into()));
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.result.push(s.into());
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "== INPUTS ==").unwrap();
        writeln!(s, "subcommand: {}", self.subcommand).unwrap();
        for (k, v) in &self.inputs {
            writeln!(s, "{k}: {v}").unwrap();
        }
        writeln!(s, "== RESULT ==").unwrap();
        for l in &self.result {
            writeln!(s, "{l}").unwrap();
        }
        writeln!(s, "== CERTIFICATION ==").unwrap();
        writeln!(s, "certified frontier: {}", self.frontier).unwrap();
        writeln!(s, "exact arithmetic: yes").unwrap();
        for (name, ok) in &self.checks {
            writeln!(s, "{}: {name}", if *ok { "PASS" } else { "FAIL" }).unwrap();
        }
        writeln!(s, "status: {}", if self.passed() { "PASS" } else { "FAIL" }).unwrap();
        s
    }
}
