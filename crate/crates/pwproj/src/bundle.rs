//! Artifact directory layout:
//!
//! ```text
//! cert/     distortion.json, matching certificates, freeness certificates
//! words/    words.txt (one per line), search.json (cores, matrices, stats)
//! tset/     tset.json
//! reports/  config.json, campaign.json, records.jsonl, timing.json
//! ```

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::campaign::CampaignOutput;
use crate::config::resolved;
use crate::format::{to_json, Exported};
use crate::text::format_words;
use pwproj_core::pipeline::PipelineConfig;

pub struct Bundle {
    root: PathBuf,
}

impl Bundle {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Bundle { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// `dir/name`, creating `dir`.
    pub fn path(&self, dir: &str, name: &str) -> io::Result<PathBuf> {
        let d = self.root.join(dir);
        fs::create_dir_all(&d)?;
        Ok(d.join(name))
    }

    pub fn write_text(&self, dir: &str, name: &str, text: &str) -> io::Result<PathBuf> {
        let p = self.path(dir, name)?;
        fs::write(&p, text)?;
        Ok(p)
    }

    pub fn write<T: Exported>(&self, dir: &str, name: &str, x: &T) -> io::Result<PathBuf> {
        self.write_text(dir, name, &to_json(x))
    }

    pub fn write_serde<T: Serialize>(&self, dir: &str, name: &str, x: &T) -> io::Result<PathBuf> {
        let mut s = serde_json::to_string_pretty(x).map_err(io::Error::other)?;
        s.push('\n');
        self.write_text(dir, name, &s)
    }

    pub fn write_campaign(&self, out: &CampaignOutput) -> io::Result<()> {
        let r = &out.report;
        if let Some(c) = &out.construction {
            self.write("cert", "distortion.json", &c.distortion)?;
            self.write_text("words", "words.txt", &format_words(&c.words.words))?;
            self.write("words", "search.json", &c.words)?;
            self.write("tset", "tset.json", &c.set)?;
            self.write_serde("reports", "config.json", &r.config)?;
        }
        if let Some(cert) = &out.example {
            self.write("cert", "matching-example.json", cert)?;
        }
        self.write_serde("reports", "campaign.json", r)?;
        let mut f = BufWriter::new(fs::File::create(self.path("reports", "records.jsonl")?)?);
        for rec in &r.records {
            serde_json::to_writer(&mut f, rec).map_err(io::Error::other)?;
            f.write_all(b"\n")?;
        }
        f.flush()?;
        self.write_serde("reports", "timing.json", &out.timing)?;
        Ok(())
    }
}

pub fn config_json(cfg: &PipelineConfig) -> String {
    let mut s = serde_json::to_string_pretty(&resolved(cfg)).expect("serializes");
    s.push('\n');
    s
}
