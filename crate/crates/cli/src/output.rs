use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

/// Buffered writer to a file or stdout.
pub struct Sink {
    inner: BufWriter<Box<dyn Write>>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Sink> {
        let w: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Sink {
            inner: BufWriter::new(w),
        })
    }

    pub fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.inner, "{s}")?;
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        serde_json::to_writer(&mut self.inner, value)?;
        writeln!(self.inner)?;
        Ok(())
    }

    pub fn raw(&mut self, s: &str) -> Result<()> {
        self.inner.write_all(s.as_bytes())?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

/// Quotes a CSV field when it holds a comma or quote.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
