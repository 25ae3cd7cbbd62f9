export class MissingFile extends Error {
  constructor(public readonly path: string) {
    super(`required artifact file is missing: ${path}`);
    this.name = 'MissingFile';
  }
}

export class MissingColumn extends Error {
  constructor(public readonly file: string, public readonly column: string) {
    super(`${file} is missing required column '${column}'`);
    this.name = 'MissingColumn';
  }
}
