use std::fmt::Write;

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// CSV builder: a config comment line, a header row, LF line endings.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(config_echo: &str, header: &[String]) -> Self {
        let mut text = String::new();
        writeln!(text, "# mff-config: {config_echo}").unwrap();
        text.push_str(&header.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -0.6780719051126377, 1.0, 1e-300, 123456789.125] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1.0), "1.0");
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new("{}", &["a".into(), "b".into()]);
        c.row(&["1".into(), "2".into()]);
        assert_eq!(c.finish(), "# mff-config: {}\na,b\n1,2\n");
    }
}
