//! Line-oriented certificates.
//!
//! ```text
//! cert arrow v1
//! argv arrow @0 @1 @2 --colors 2
//! verdict fails
//! result arrow fails
//! result coloring 0 0 1 1
//! begin inputs
//! ...structure file...
//! end inputs
//! ```
//!
//! Structure arguments are replaced by `@i`, the i-th embedded input.

use structures::Structure;

use crate::format::{parse_structure_file, serialize_structure_file, ParseError, StructureFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
        }
    }

    pub fn code(self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Fails => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: String,
    pub argv: Vec<String>,
    pub verdict: Verdict,
    pub result: Vec<String>,
    pub inputs: Vec<Structure>,
}

impl Certificate {
    pub fn to_text(&self) -> String {
        let mut out = format!("cert {} v1\nargv {}\nverdict {}\n", self.kind, self.argv.join(" "), self.verdict.as_str());
        for line in &self.result {
            out.push_str("result ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("begin inputs\n");
        let file = StructureFile::from_structures(self.inputs.iter().enumerate().map(|(i, s)| (format!("in{i}"), s)));
        out.push_str(&serialize_structure_file(&file));
        out.push_str("end inputs\n");
        out
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("no `cert <kind> v1` header")]
    NoHeader,
    #[error("unsupported certificate version `{0}`")]
    Version(String),
    #[error("certificate line {0}: {1}")]
    Malformed(usize, String),
    #[error("embedded inputs: {0}")]
    Inputs(ParseError),
}

/// Parses the first certificate in `text`; lines before the header are ignored.
pub fn parse_certificate(text: &str) -> Result<Certificate, CertError> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines.iter().position(|l| l.starts_with("cert ")).ok_or(CertError::NoHeader)?;
    let header: Vec<&str> = lines[start].split_whitespace().collect();
    if header.len() != 3 {
        return Err(CertError::Malformed(start + 1, "expected `cert <kind> v1`".into()));
    }
    if header[2] != "v1" {
        return Err(CertError::Version(header[2].into()));
    }
    let kind = header[1].to_string();
    let mut i = start + 1;
    let field = |i: usize, key: &str| -> Result<String, CertError> {
        lines
            .get(i)
            .and_then(|l| l.strip_prefix(key))
            .and_then(|l| l.strip_prefix(' ').or(if l.is_empty() { Some("") } else { None }))
            .map(str::to_string)
            .ok_or_else(|| CertError::Malformed(i + 1, format!("expected `{key}` line")))
    };
    let argv: Vec<String> = field(i, "argv")?.split_whitespace().map(str::to_string).collect();
    i += 1;
    let verdict = match field(i, "verdict")?.as_str() {
        "holds" => Verdict::Holds,
        "fails" => Verdict::Fails,
        v => return Err(CertError::Malformed(i + 1, format!("unknown verdict `{v}`"))),
    };
    i += 1;
    let mut result = Vec::new();
    while let Some(r) = lines.get(i).and_then(|l| l.strip_prefix("result ")) {
        result.push(r.to_string());
        i += 1;
    }
    if lines.get(i) != Some(&"begin inputs") {
        return Err(CertError::Malformed(i + 1, "expected `begin inputs`".into()));
    }
    let end = lines[i..].iter().position(|l| *l == "end inputs").map(|k| i + k).ok_or(CertError::Malformed(i + 1, "missing `end inputs`".into()))?;
    let body = lines[i + 1..end].join("\n");
    let file = parse_structure_file(&body).map_err(|e| {
        CertError::Inputs(ParseError { line: e.line + i + 1, message: e.message })
    })?;
    let mut inputs = Vec::new();
    for k in 0.. {
        match file.structure(&format!("in{k}")) {
            Some(s) => inputs.push(s.clone()),
            None => break,
        }
    }
    Ok(Certificate { kind, argv, verdict, result, inputs })
}
